"""Information-loss analysis and surjectivity verdicts.

Loss at a box is volume minus log_q(output size), measured in q-its
(one q-it = log2 q bits).  The per-cell limit of log_q(output size) is
estimated through the Fekete engine; it equals 1 exactly when the
automaton is surjective, so any certified upper bound below 1 is a
nonsurjectivity signal.  The threshold search locates, inside a finite
box, the least size beyond which the loss provably dominates the
boundary excess plus a constant.  Verdicts respect the decidability
split: dimension 1 is decided exactly, higher dimensions are never
declared surjective, only NONSURJECTIVE (with an orphan certificate) or
UNKNOWN (with the cleared frontier).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from enum import Enum

from .ca import CellularAutomaton, Pattern, RightPolytope
from .counting import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    Decision1D,
    OrphanCertificate,
    OutRecord,
    decide_surjectivity_1d,
    find_orphan,
    out_size_bruteforce,
    out_size_transfer_1d,
)
from .subadditive import (
    FeketeEstimate,
    MultiIndex,
    SubadditiveFn,
    Violation,
    as_index,
    fekete_limit_estimate,
    leq_pi,
)

__all__ = [
    "LossRecord",
    "LambdaEstimate",
    "ThresholdReport",
    "VerdictStatus",
    "SurjectivityVerdict",
    "log_base",
    "loss",
    "lambda_estimate",
    "boundary_excess",
    "minimal_upward_threshold",
    "excess_ratio_threshold",
    "theorem2_threshold",
    "surjectivity_report",
]

# Maximum side used when scanning box sizes for orphans in d >= 2.
_SCAN_MAX_SIDE = 12


def log_base(n: int, q: int) -> float:
    """log_q of a positive integer, exact when n is a power of q."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = round(math.log(n, q)) if n > 1 else 0
    if k >= 0 and q**k == n:
        return float(k)
    return math.log(n) / math.log(q)


@dataclass(frozen=True)
class LossRecord:
    """Loss of information at one box, in q-its.

    lambda_qits = volume - log_q(out_size) >= 0, and ratio =
    log_q(out_size)/volume lies in [0, 1]; ratio is 1 iff the loss is 0.
    """

    sides: MultiIndex
    lambda_qits: float
    ratio: float
    q: int

    @property
    def lambda_bits(self) -> float:
        return self.lambda_qits * math.log2(self.q)


def loss(ca: CellularAutomaton, record: OutRecord) -> LossRecord:
    """Loss record derived from an exact output count."""
    vol = record.sides.volume
    lq = log_base(record.out_size, ca.state_count)
    return LossRecord(
        sides=record.sides,
        lambda_qits=vol - lq,
        ratio=lq / vol,
        q=ca.state_count,
    )


@dataclass(frozen=True)
class LambdaEstimate:
    """Bracketed estimate of the per-cell limit of log_q(output size).

    The limit is at most 1, with equality exactly for surjective
    automata; the bracket is clamped to [0, 1] accordingly.  `partial`
    marks estimates where some scheduled boxes were refused for budget.
    """

    estimate: FeketeEstimate
    records: tuple[OutRecord, ...]
    q: int
    partial: bool = False
    notes: tuple[str, ...] = ()
    subadditivity_violations: tuple[Violation, ...] = ()

    @property
    def bracket(self) -> tuple[float, float]:
        lo, hi = self.estimate.bracket
        return (min(max(lo, 0.0), 1.0), min(max(hi, 0.0), 1.0))

    @property
    def excludes_surjective(self) -> bool:
        """True when the certified upper end already rules out limit 1."""
        return self.bracket[1] < 1.0 - 1e-12


def _log_subadd_violations(
    table: dict[MultiIndex, int], exact_cap: int = 64, sampled: int = 500, seed: int = 0
) -> list[Violation]:
    """Spot-check Out(x + y) <= Out(x) * Out(y) coordinatewise, exactly.

    All triples whose summed coordinate stays <= exact_cap are checked,
    plus a seeded sample across the full table.  Integer comparison, no
    rounding.  Violations would contradict the pattern-joining argument,
    so a nonempty result flags a counting bug rather than a property of
    the automaton.
    """
    if not table:
        return []
    dim = next(iter(table)).dim
    out: list[Violation] = []
    checked = set()

    def check(x: MultiIndex, axis: int, y: int):
        total = x.replace_coord(axis, x[axis] + y)
        other = x.replace_coord(axis, y)
        key = (axis, x, y)
        if key in checked or total not in table or other not in table:
            return
        checked.add(key)
        if table[total] > table[x] * table[other]:
            out.append(
                Violation(
                    "subadditive",
                    axis,
                    x,
                    y,
                    float(table[total]),
                    float(table[x] * table[other]),
                )
            )

    for x in table:
        for axis in range(dim):
            if x[axis] > exact_cap:
                continue
            for y in range(1, exact_cap - x[axis] + 1):
                check(x, axis, y)

    keys = sorted(table)
    rng = random.Random(seed)
    for _ in range(sampled):
        x = keys[rng.randrange(len(keys))]
        axis = rng.randrange(dim)
        y = rng.randrange(1, max(k[axis] for k in keys) + 1)
        check(x, axis, y)
    return out


def lambda_estimate(
    ca: CellularAutomaton, schedule, budget: int = DEFAULT_BUDGET
) -> LambdaEstimate:
    """Estimate the per-cell limit over a schedule of box sizes.

    Output sizes come from the image-automaton path in dimension 1 and
    from brute force otherwise; boxes refused for budget are skipped and
    the estimate marked partial.  The exact counts are verified
    log-subadditive before the Fekete machinery runs on log_q(out)."""
    boxes = [as_index(b, ca.dimension) for b in schedule]
    if not boxes:
        raise ValueError("schedule must be nonempty")
    q = ca.state_count

    records: list[OutRecord] = []
    notes: list[str] = []
    partial = False
    if ca.dimension == 1:
        n_max = max(b[0] for b in boxes)
        try:
            all_records = out_size_transfer_1d(ca, n_max)
            wanted = {b for b in boxes}
            records = [r for r in all_records if r.sides in wanted]
        except BudgetExceeded as exc:
            notes.append(f"transfer path refused: {exc}")
            partial = True
    if not records:
        for b in boxes:
            try:
                records.append(out_size_bruteforce(ca, b, budget=budget))
            except BudgetExceeded as exc:
                partial = True
                notes.append(f"skipped {tuple(b)}: {exc}")
    if not records:
        raise BudgetExceeded("no scheduled box fits the budget")

    table = {r.sides: r.out_size for r in records}
    violations = tuple(_log_subadd_violations(table))

    fn = SubadditiveFn(
        ca.dimension,
        lambda x: log_base(table[x], q),
        name=f"log{q}(out[{ca.name or 'ca'}])",
    )
    computed = list(table)
    top = computed[0]
    for b in computed[1:]:
        top = top.join(b)
    base = top if top in table else max(computed)
    est = fekete_limit_estimate(fn, base, computed)
    return LambdaEstimate(
        estimate=est,
        records=tuple(records),
        q=q,
        partial=partial,
        notes=tuple(notes),
        subadditivity_violations=violations,
    )


def boundary_excess(x, r) -> int:
    """prod(x_i + r_i) - prod(x_i): cells a boundary of widths r adds to box x."""
    x = as_index(x)
    if len(r) != x.dim:
        raise ValueError("boundary widths must match the box dimension")
    if any(v < 0 for v in r):
        raise ValueError("boundary widths must be >= 0")
    return math.prod(xi + ri for xi, ri in zip(x, r)) - x.volume


def minimal_upward_threshold(predicate, search_box):
    """Least box t such that the predicate holds at every x >= t in the box.

    Returns (t, ok) where ok maps each cell of the search box to whether
    all cells above it (itself included) satisfy the predicate; t is None
    when no cell qualifies.  The qualifying set is upward closed, so its
    minimal elements form an antichain; ties are broken lexicographically.
    `predicate` may return None for cells it cannot evaluate; those count
    as vacuously fine but cannot serve as t themselves.
    """
    box = as_index(search_box)
    ranges = [range(1, s + 1) for s in box]
    cells = list(itertools.product(*ranges))
    ok: dict[tuple, bool] = {}
    known: dict[tuple, bool | None] = {}
    for cell in reversed(cells):
        verdict = predicate(MultiIndex(cell))
        known[cell] = verdict
        good = verdict is not False
        for axis in range(box.dim):
            if cell[axis] < box[axis]:
                up = cell[:axis] + (cell[axis] + 1,) + cell[axis + 1:]
                good = good and ok[up]
                if not good:
                    break
        ok[cell] = good

    candidates = []
    for cell in cells:
        if not ok[cell] or known[cell] is None:
            continue
        minimal = True
        for axis in range(box.dim):
            if cell[axis] > 1:
                down = cell[:axis] + (cell[axis] - 1,) + cell[axis + 1:]
                if ok[down] and known[down] is not None:
                    minimal = False
                    break
        if minimal:
            candidates.append(cell)
    if not candidates:
        return None, ok
    return MultiIndex(min(candidates)), ok


def excess_ratio_threshold(r, bound: float, search_box, K: float = 0.0):
    """Least t with (boundary excess + K) / volume < bound above t in the box.

    The ratio tends to 0 along the directed set for any fixed widths, so
    for every positive bound a threshold exists once the box is large
    enough; within a finite box the search may still fail (returns None).
    """

    def pred(x: MultiIndex) -> bool:
        return (boundary_excess(x, r) + K) / x.volume < bound

    t, _ = minimal_upward_threshold(pred, search_box)
    return t


@dataclass(frozen=True)
class ThresholdReport:
    """Verified region for the loss-dominates-boundary inequality.

    Inside `checked_region` (every computed x above `t` in the search
    box) both gate conditions held: ratio(x) <= delta and
    (excess + K)/volume <= 1 - delta; together they force
    loss(x) >= excess(x) + K, which `verified` re-checks literally.
    """

    K: float
    r: tuple[int, ...]
    delta: float
    search_box: MultiIndex
    found: bool
    t: MultiIndex | None
    checked_region: tuple[MultiIndex, ...]
    verified: bool
    lambda_upper: float


def _out_table_on_box(
    ca: CellularAutomaton, search_box: MultiIndex, budget: int
) -> tuple[dict[MultiIndex, int], list[str]]:
    notes: list[str] = []
    table: dict[MultiIndex, int] = {}
    if ca.dimension == 1:
        for rec in out_size_transfer_1d(ca, search_box[0]):
            table[rec.sides] = rec.out_size
        return table, notes
    for cell in itertools.product(*[range(1, s + 1) for s in search_box]):
        sides = MultiIndex(cell)
        try:
            table[sides] = out_size_bruteforce(ca, sides, budget=budget).out_size
        except BudgetExceeded as exc:
            notes.append(f"skipped {cell}: {exc}")
    return table, notes


def theorem2_threshold(
    ca: CellularAutomaton,
    K: float,
    r,
    delta: float | None,
    search_box,
    budget: int = DEFAULT_BUDGET,
    assume_nonsurjective: bool = False,
) -> ThresholdReport:
    """Search a finite box for the loss-dominates-boundary threshold.

    Only the region actually verified is reported; nothing is
    extrapolated beyond the search box.  Requires evidence of
    nonsurjectivity (the dichotomy's second branch): in dimension 1 the
    exact decision is run, otherwise a deficient count inside the box or
    the caller's override is accepted.  delta defaults to midway between
    the observed upper bound on the per-cell limit and 1.
    """
    search_box = as_index(search_box, ca.dimension)
    r = tuple(int(v) for v in r)
    if len(r) != ca.dimension or any(v < 0 for v in r):
        raise ValueError("boundary widths must be nonnegative, one per axis")
    if K < 0:
        raise ValueError("K must be >= 0")

    q = ca.state_count
    table, notes = _out_table_on_box(ca, search_box, budget)
    if not table:
        raise BudgetExceeded("no cell of the search box fits the budget")

    if ca.dimension == 1:
        if decide_surjectivity_1d(ca).surjective:
            raise ValueError(
                "automaton is surjective: the loss bound only holds on the "
                "nonsurjective branch of the dichotomy"
            )
    elif not assume_nonsurjective:
        if all(table[s] == q**s.volume for s in table):
            raise ValueError(
                "no deficient count found in the search box; pass "
                "assume_nonsurjective=True to search anyway"
            )

    ratios = {s: log_base(table[s], q) / s.volume for s in table}
    lambda_upper = min(ratios.values())
    if delta is None:
        delta = (lambda_upper + 1.0) / 2.0
    if not lambda_upper < delta < 1.0:
        raise ValueError(
            f"delta must lie strictly between the observed upper bound "
            f"{lambda_upper:.6f} and 1, got {delta}"
        )

    def pred(x: MultiIndex):
        if x not in table:
            return None
        if ratios[x] > delta:
            return False
        return (boundary_excess(x, r) + K) / x.volume <= 1.0 - delta

    t, _ = minimal_upward_threshold(pred, search_box)
    if t is None:
        return ThresholdReport(
            K=K, r=r, delta=delta, search_box=search_box, found=False,
            t=None, checked_region=(), verified=False, lambda_upper=lambda_upper,
        )

    region = tuple(sorted(x for x in table if leq_pi(t, x)))
    verified = True
    for x in region:
        lam = x.volume - log_base(table[x], q)
        want = boundary_excess(x, r) + K
        if lam < want - 1e-9 * max(1.0, abs(want)):
            verified = False
    return ThresholdReport(
        K=K, r=r, delta=delta, search_box=search_box, found=True,
        t=t, checked_region=region, verified=verified, lambda_upper=lambda_upper,
    )


class VerdictStatus(Enum):
    PROVED_SURJECTIVE = "PROVED_SURJECTIVE"
    NONSURJECTIVE = "NONSURJECTIVE"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SurjectivityVerdict:
    """Outcome of the surjectivity analysis.

    PROVED_SURJECTIVE only ever arises in dimension 1 (the exact
    decision); NONSURJECTIVE carries an orphan certificate; UNKNOWN
    carries the frontier of box sizes cleared within the budget so a
    later run can resume beyond them.
    """

    status: VerdictStatus
    certificate: OrphanCertificate | None = None
    cleared: tuple[MultiIndex, ...] = ()
    note: str = ""


def _boxes_by_volume(dim: int, max_side: int):
    boxes = [
        MultiIndex(c) for c in itertools.product(range(1, max_side + 1), repeat=dim)
    ]
    return sorted(boxes, key=lambda b: (b.volume, tuple(b)))


def surjectivity_report(
    ca: CellularAutomaton, budget: int = DEFAULT_BUDGET
) -> SurjectivityVerdict:
    """Verdict per the decidability split.

    Dimension 1: the subset decision, exact; its orphan word becomes the
    certificate.  Dimension >= 2: scan box sizes in volume order looking
    for an orphan, spending at most `budget` enumerated inputs in total;
    surjectivity is never claimed, so exhausting the budget yields
    UNKNOWN with the cleared sizes.
    """
    from .ca import minkowski_sum  # local import to avoid cycle noise

    if ca.dimension == 1:
        try:
            decision = decide_surjectivity_1d(ca)
        except BudgetExceeded as exc:
            return SurjectivityVerdict(
                status=VerdictStatus.UNKNOWN, note=f"decision refused: {exc}"
            )
        if decision.surjective:
            return SurjectivityVerdict(status=VerdictStatus.PROVED_SURJECTIVE)
        word = decision.orphan_word
        sides = MultiIndex((len(word),))
        cert = OrphanCertificate(sides=sides, pattern=Pattern(RightPolytope(sides), word))
        return SurjectivityVerdict(status=VerdictStatus.NONSURJECTIVE, certificate=cert)

    remaining = budget
    cleared: list[MultiIndex] = []
    for sides in _boxes_by_volume(ca.dimension, _SCAN_MAX_SIDE):
        region = minkowski_sum(RightPolytope(sides), ca.neighborhood)
        cost = ca.state_count ** len(region.cells)
        if cost > remaining:
            return SurjectivityVerdict(
                status=VerdictStatus.UNKNOWN,
                cleared=tuple(cleared),
                note=(
                    f"budget exhausted at size {tuple(sides)} "
                    f"(cost {cost} > remaining {remaining})"
                ),
            )
        cert = find_orphan(ca, sides, budget=remaining)
        remaining -= cost
        if cert is not None:
            return SurjectivityVerdict(
                status=VerdictStatus.NONSURJECTIVE,
                certificate=cert,
                cleared=tuple(cleared),
            )
        cleared.append(sides)
    return SurjectivityVerdict(
        status=VerdictStatus.UNKNOWN,
        cleared=tuple(cleared),
        note=f"no orphan up to side {_SCAN_MAX_SIDE}; larger sizes not attempted",
    )
