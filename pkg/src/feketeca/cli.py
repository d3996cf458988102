"""Command-line front end.

Subcommands: out-table (exact count/loss CSV), decide (surjectivity
verdict with certificate, exit code 0/10/20), lambda (per-cell limit
bracket plus ratio CSV), fekete (standalone subadditivity check and
limit estimate).  Output is deterministic byte for byte given identical
inputs, flags and seed.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys

from .analysis import (
    VerdictStatus,
    lambda_estimate,
    loss,
    surjectivity_report,
)
from .ca import BUILTIN_NAMES, CellularAutomaton, make_builtin
from .counting import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    OrphanCertificate,
    out_size_bruteforce,
    out_size_transfer_1d,
)
from .subadditive import (
    MultiIndex,
    SubadditiveFn,
    check_subadditivity,
    check_subadditivity_on_table,
    fekete_limit_estimate,
    subadditivity_triple_count,
)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_NONSURJECTIVE = 10
EXIT_UNKNOWN = 20


class DescriptionError(Exception):
    """Invalid automaton description file; the message names the bad key."""


def _fmt12(value: float) -> str:
    return format(value, ".12g")


def parse_sides(token: str, dim: int | None = None) -> MultiIndex:
    """Sides like '3' or '2x3' or '2 x 3' ('x'-separated, locale-free)."""
    parts = token.replace(" ", "").split("x")
    try:
        sides = MultiIndex(int(p) for p in parts)
    except ValueError as exc:
        raise DescriptionError(f"bad sides {token!r}: {exc}") from None
    if dim is not None and sides.dim != dim:
        raise DescriptionError(
            f"sides {token!r} have dimension {sides.dim}, automaton has {dim}"
        )
    return sides


def parse_schedule(text: str, dim: int) -> list[MultiIndex]:
    """'diag:1..N' for the diagonal, or an explicit comma list of sides."""
    text = text.strip()
    if text.startswith("diag:"):
        spec = text[len("diag:"):]
        if ".." not in spec:
            raise DescriptionError(f"bad schedule {text!r}: expected diag:LO..HI")
        lo_s, hi_s = spec.split("..", 1)
        try:
            lo, hi = int(lo_s), int(hi_s)
        except ValueError:
            raise DescriptionError(f"bad schedule {text!r}: bounds must be integers") from None
        if not 1 <= lo <= hi:
            raise DescriptionError(f"bad schedule {text!r}: need 1 <= LO <= HI")
        return [MultiIndex((k,) * dim) for k in range(lo, hi + 1)]
    return [parse_sides(tok, dim) for tok in text.split(",") if tok.strip()]


def load_description(path: str) -> tuple[CellularAutomaton, dict | None]:
    """Parse a JSON automaton description.

    Keys: dimension, states (count or label list), neighborhood (ordered
    offset vectors; bare integers allowed in dimension 1) and rule
    (either {"table": [...q^n entries...]} or {"builtin": name}).  Labels
    are mapped to 0..q-1 in list order; the mapping is returned so the
    caller can report it.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise DescriptionError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise DescriptionError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise DescriptionError("top level must be an object")

    known = {"dimension", "states", "neighborhood", "rule", "name"}
    for key in data:
        if key not in known:
            raise DescriptionError(f"unknown key {key!r}")

    rule = data.get("rule")
    if rule is None:
        raise DescriptionError("key 'rule' is required")
    if not isinstance(rule, dict) or len(rule) != 1 or next(iter(rule)) not in ("table", "builtin"):
        raise DescriptionError("key 'rule' must be {\"table\": [...]} or {\"builtin\": name}")

    if "builtin" in rule:
        try:
            ca = make_builtin(rule["builtin"])
        except ValueError as exc:
            raise DescriptionError(f"key 'rule': {exc}") from None
        if "dimension" in data and data["dimension"] != ca.dimension:
            raise DescriptionError(
                f"key 'dimension': builtin {ca.name!r} has dimension {ca.dimension}"
            )
        if "states" in data and data["states"] != ca.state_count:
            raise DescriptionError(
                f"key 'states': builtin {ca.name!r} has {ca.state_count} states"
            )
        return ca, None

    for key in ("dimension", "states", "neighborhood"):
        if key not in data:
            raise DescriptionError(f"key {key!r} is required with a rule table")
    dim = data["dimension"]
    if not isinstance(dim, int) or dim < 1:
        raise DescriptionError("key 'dimension': must be a positive integer")

    states = data["states"]
    labels = None
    if isinstance(states, int):
        q = states
    elif isinstance(states, list):
        if len(set(map(str, states))) != len(states):
            raise DescriptionError("key 'states': labels must be distinct")
        labels = {str(lab): i for i, lab in enumerate(states)}
        q = len(states)
    else:
        raise DescriptionError("key 'states': must be an integer or a label list")
    if q < 2:
        raise DescriptionError("key 'states': need at least two states")

    nbhd = data["neighborhood"]
    if not isinstance(nbhd, list) or not nbhd:
        raise DescriptionError("key 'neighborhood': must be a nonempty list")
    offsets = []
    for vec in nbhd:
        if isinstance(vec, int):
            vec = [vec]
        if not isinstance(vec, list) or len(vec) != dim or not all(isinstance(v, int) for v in vec):
            raise DescriptionError(
                f"key 'neighborhood': offset {vec!r} is not a {dim}-vector of integers"
            )
        offsets.append(tuple(vec))

    table = rule["table"]
    if not isinstance(table, list):
        raise DescriptionError("key 'rule': 'table' must be a list")
    if labels is not None:
        try:
            table = [labels[str(v)] for v in table]
        except KeyError as exc:
            raise DescriptionError(f"key 'rule': table entry {exc} is not a declared label") from None
    try:
        ca = CellularAutomaton(dim, q, tuple(offsets), tuple(table), name=data.get("name", ""))
    except ValueError as exc:
        raise DescriptionError(f"key 'rule'/'neighborhood': {exc}") from None
    return ca, labels


def _open_out(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _sides_for_table(args, ca: CellularAutomaton) -> list[MultiIndex]:
    if args.sides_list:
        return [parse_sides(tok, ca.dimension) for tok in args.sides_list.split(",") if tok.strip()]
    n = args.max_sides
    if ca.dimension == 1:
        return [MultiIndex((k,)) for k in range(1, n + 1)]
    return [
        MultiIndex(c)
        for c in itertools.product(range(1, n + 1), repeat=ca.dimension)
    ]


def cmd_out_table(args) -> int:
    ca, labels = load_description(args.file)
    sides_list = _sides_for_table(args, ca)
    method = args.method
    if method == "transfer" and ca.dimension != 1:
        raise DescriptionError("method 'transfer' requires a 1-dimensional automaton")
    use_transfer = ca.dimension == 1 and method in ("auto", "transfer")

    transfer_by_sides = {}
    if use_transfer:
        n_max = max(s[0] for s in sides_list)
        try:
            for rec in out_size_transfer_1d(ca, n_max):
                transfer_by_sides[rec.sides] = rec
        except BudgetExceeded as exc:
            if method == "transfer":
                print(f"error: {exc}", file=sys.stderr)
                return EXIT_USAGE
            transfer_by_sides = {}

    out, close = _open_out(args.out)
    try:
        if labels:
            print("# states: " + " ".join(f"{lab}={i}" for lab, i in labels.items()), file=out)
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            [f"x{i+1}" for i in range(ca.dimension)]
            + ["out_size", "full_size", "ratio", "lambda_qits", "status"]
        )
        for sides in sides_list:
            rec = transfer_by_sides.get(sides)
            if rec is None:
                try:
                    rec = out_size_bruteforce(ca, sides, budget=args.budget)
                except BudgetExceeded as exc:
                    writer.writerow(
                        [str(s) for s in sides]
                        + ["", "", "", "", f"refused: cost {exc.cost} exceeds budget {args.budget}"]
                    )
                    continue
            rec_loss = loss(ca, rec)
            writer.writerow(
                [str(s) for s in sides]
                + [
                    str(rec.out_size),
                    str(rec.full_size),
                    _fmt12(rec_loss.ratio),
                    _fmt12(rec_loss.lambda_qits),
                    "ok",
                ]
            )
    finally:
        if close:
            out.close()
    return EXIT_OK


def certificate_block(cert: OrphanCertificate, q: int) -> str:
    lines = ["```"]
    lines.append("sides: " + " x ".join(str(s) for s in cert.sides))
    for row in cert.pattern.grid_rows():
        lines.append(" ".join(str(v) for v in row))
    lines.append(f"code: {cert.pattern.code(q)}")
    lines.append("```")
    return "\n".join(lines)


def cmd_decide(args) -> int:
    ca, labels = load_description(args.file)
    verdict = surjectivity_report(ca, budget=args.budget)
    name = ca.name or args.file
    print(f"automaton: {name} (d={ca.dimension}, q={ca.state_count}, |N|={ca.neighborhood_size})")
    if labels:
        print("states: " + " ".join(f"{lab}={i}" for lab, i in labels.items()))
    print(f"verdict: {verdict.status.value}")
    if verdict.status is VerdictStatus.PROVED_SURJECTIVE:
        return EXIT_OK
    if verdict.status is VerdictStatus.NONSURJECTIVE:
        cert = verdict.certificate
        print(f"orphan pattern on sides {' x '.join(str(s) for s in cert.sides)}:")
        print("certificate:")
        print(certificate_block(cert, ca.state_count))
        return EXIT_NONSURJECTIVE
    if verdict.cleared:
        print("cleared sizes: " + ", ".join("x".join(str(s) for s in b) for b in verdict.cleared))
    if verdict.note:
        print(f"note: {verdict.note}")
    return EXIT_UNKNOWN


def cmd_lambda(args) -> int:
    ca, labels = load_description(args.file)
    if args.schedule:
        schedule = parse_schedule(args.schedule, ca.dimension)
    elif ca.dimension == 1:
        schedule = parse_schedule("diag:1..1000", 1)
    else:
        schedule = parse_schedule("diag:1..3", ca.dimension)
    est = lambda_estimate(ca, schedule, budget=args.budget)
    lo, hi = est.bracket
    name = ca.name or args.file
    print(f"automaton: {name} (d={ca.dimension}, q={ca.state_count})")
    if labels:
        print("states: " + " ".join(f"{lab}={i}" for lab, i in labels.items()))
    print(f"lambda bracket: [{lo:.6f}, {hi:.6f}]")
    print(f"certified upper bound (running infimum): {_fmt12(est.estimate.running_inf)}")
    print(f"boxes evaluated: {len(est.records)}")
    if est.subadditivity_violations:
        print(f"WARNING: {len(est.subadditivity_violations)} log-subadditivity violations")
    if est.partial:
        for note in est.notes:
            print(f"partial: {note}")
    out, close = _open_out(args.out)
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([f"x{i+1}" for i in range(ca.dimension)] + ["out_size", "ratio"])
        for rec in est.records:
            rec_loss = loss(ca, rec)
            writer.writerow(
                [str(s) for s in rec.sides] + [str(rec.out_size), _fmt12(rec_loss.ratio)]
            )
    finally:
        if close:
            out.close()
    return EXIT_OK


_FEKETE_BUILTINS = {
    "3n": lambda: SubadditiveFn(1, lambda x: 3.0 * x[0], name="3n"),
    "n^2": lambda: SubadditiveFn(1, lambda x: float(x[0] ** 2), name="n^2"),
    "xy+x+y": lambda: SubadditiveFn(
        2, lambda x: float(x[0] * x[1] + x[0] + x[1]), name="xy+x+y"
    ),
}


def load_fekete_table(path: str) -> SubadditiveFn:
    """JSON table {"values": {"3": 5, "2x4": 7, ...}} with 'x'-separated keys."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise DescriptionError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise DescriptionError(f"not valid JSON: {exc}") from None
    values = data.get("values") if isinstance(data, dict) else None
    if not isinstance(values, dict) or not values:
        raise DescriptionError("key 'values' must be a nonempty object")
    table = {}
    for key, val in values.items():
        idx = parse_sides(key)
        if not isinstance(val, (int, float)):
            raise DescriptionError(f"key 'values': entry {key!r} is not a number")
        table[idx] = float(val)
    return SubadditiveFn.from_table(table, name=path)


def cmd_fekete(args) -> int:
    if bool(args.function) == bool(args.table):
        raise DescriptionError("exactly one of --function and --table is required")
    if args.function:
        try:
            f = _FEKETE_BUILTINS[args.function]()
        except KeyError:
            raise DescriptionError(
                f"unknown function {args.function!r}; known: "
                + ", ".join(sorted(_FEKETE_BUILTINS))
            ) from None
    else:
        f = load_fekete_table(args.table)

    schedule = parse_schedule(args.schedule, f.dim)
    if args.table:
        for box in schedule:
            if box not in f.table:
                raise DescriptionError(
                    f"table is incomplete on the schedule: missing index "
                    + "x".join(str(s) for s in box)
                )
        violations = check_subadditivity_on_table(f)
        scope = f"table ({len(f.table)} entries)"
    else:
        box = schedule[0]
        for b in schedule[1:]:
            box = box.join(b)
        count = subadditivity_triple_count(box)
        violations = check_subadditivity(f, box, seed=args.seed)
        mode = "exhaustive" if count <= 10**6 else f"sampled (seed {args.seed})"
        scope = f"box {'x'.join(str(s) for s in box)}, {count} triples, {mode}"

    print(f"function: {f.name} (dimension {f.dim})")
    print(f"subadditivity check: {scope}")
    if violations:
        for v in violations[:20]:
            if v.kind == "negative":
                print(f"violation: negative value f{tuple(v.x)} = {_fmt12(v.lhs)}")
            else:
                print(
                    f"violation: axis {v.axis}, x={tuple(v.x)}, y={v.y}: "
                    f"lhs {_fmt12(v.lhs)} > rhs {_fmt12(v.rhs)}"
                )
        if len(violations) > 20:
            print(f"... and {len(violations) - 20} more")
        print(f"violations: {len(violations)}")
        print("estimate suppressed: the subadditivity hypothesis fails")
        return EXIT_VIOLATIONS

    print("violations: 0")
    base = parse_sides(args.base, f.dim) if args.base else max(schedule)
    est = fekete_limit_estimate(f, base, schedule)
    lo, hi = est.bracket
    print(f"boxes evaluated: {len(est.evaluated_boxes)}")
    print(f"running infimum: {_fmt12(est.running_inf)}")
    print(f"last ratio: {_fmt12(est.last_ratio)}")
    print(f"limit bracket: [{lo:.6f}, {hi:.6f}]")
    print(
        "certified upper bound at base "
        + "x".join(str(s) for s in est.base)
        + f": {_fmt12(est.base_ratio)}"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="feketeca",
        description=(
            "Exact reachable-pattern counts, information loss and "
            "surjectivity analysis for cellular automata; standalone "
            "multivariate Fekete engine."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("out-table", help="exact count/loss table as CSV")
    p.add_argument("file", help="automaton description (JSON)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--sides-list", help="comma list of sides, e.g. 1x1,2x2,3x3")
    g.add_argument("--max-sides", type=int, help="all sides up to N per axis")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--method", choices=("auto", "brute", "transfer"), default="auto")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_out_table)

    p = sub.add_parser("decide", help="surjectivity verdict (exit 0/10/20)")
    p.add_argument("file")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("lambda", help="per-cell limit bracket plus ratio CSV")
    p.add_argument("file")
    p.add_argument("--schedule", help="diag:1..N or explicit sides list")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out", help="write the CSV here instead of stdout")
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("fekete", help="standalone subadditive-limit engine")
    p.add_argument("--function", help="builtin: " + ", ".join(sorted(_FEKETE_BUILTINS)))
    p.add_argument("--table", help="JSON value table, complete on the schedule")
    p.add_argument("--schedule", required=True)
    p.add_argument("--base", help="base box for the certified upper bound")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_fekete)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DescriptionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entrypoint():  # console script
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
