#!/usr/bin/env python3
# Surjectivity verdicts and the dimension split: dimension 1 is decided
# exactly (subset construction), dimension >= 2 is only ever refuted
# (orphan certificate) or left UNKNOWN with the cleared sizes.

from feketeca import (
    CellularAutomaton,
    VerdictStatus,
    decide_surjectivity_1d,
    make_builtin,
    surjectivity_report,
)

####
# 1. the four builtins
####

for name in ("shift", "xor1d", "and1d", "and2d"):
    ca = make_builtin(name)
    verdict = surjectivity_report(ca)
    line = f"{name:6s} -> {verdict.status.value}"
    if verdict.certificate is not None:
        cert = verdict.certificate
        line += f"  (orphan on sides {tuple(cert.sides)}: {cert.pattern.cells})"
    print(line)

####
# 2. the exact 1D decision returns the lexicographically least shortest
#    orphan word; for AND that is 101
####

print()
decision = decide_surjectivity_1d(make_builtin("and1d"))
print("and1d surjective?", decision.surjective, " orphan word:", decision.orphan_word)

####
# 3. a 2D rule with no orphan in reach: the scan clears sizes until the
#    budget wall and honestly reports UNKNOWN (never "surjective")
####

print()
shift2d = CellularAutomaton(2, 2, ((1, 0),), (0, 1), name="shift2d")
verdict = surjectivity_report(shift2d, budget=1 << 16)
print("shift2d ->", verdict.status.value)
print("cleared sizes:", [tuple(s) for s in verdict.cleared])
print("note:", verdict.note)
assert verdict.status is VerdictStatus.UNKNOWN

####
# 4. custom rules are one constructor call away: majority-of-three is
#    nonsurjective, and the decision hands over its witness
####

print()
maj = CellularAutomaton(
    1, 2, ((-1,), (0,), (1,)),
    tuple(int(a + b + c >= 2) for a in (0, 1) for b in (0, 1) for c in (0, 1)),
    name="majority3",
)
decision = decide_surjectivity_1d(maj)
print("majority3 surjective?", decision.surjective, " orphan word:", decision.orphan_word)
