"""Multivariate Fekete-lemma engine.

Works with functions f defined on positive integer d-tuples that are
(meant to be) subadditive in each coordinate separately:

    f(x_1, ..., x_j + y_j, ..., x_d)
        <= f(x_1, ..., x_j, ..., x_d) + f(x_1, ..., y_j, ..., x_d)

For such f the net f(x) / (x_1 * ... * x_d) converges along the product
order on Z_+^d, and the limit equals the infimum of that ratio over all
boxes.  This module checks the hypothesis, tracks running infima over a
schedule of boxes, computes the division-decomposition upper bound used
in the convergence proof, and brackets the limit.
"""

from __future__ import annotations

import itertools
import math
import operator
import random
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Mapping, Sequence

__all__ = [
    "MultiIndex",
    "as_index",
    "leq_pi",
    "SubadditiveFn",
    "Violation",
    "FeketeEstimate",
    "subadditivity_triple_count",
    "check_subadditivity",
    "check_subadditivity_on_table",
    "running_infimum",
    "decomposition_bound",
    "fekete_limit_estimate",
    "diagonal_schedule",
    "geometric_schedule",
]

# Relative slack for float comparisons in the subadditivity check: ties at
# rounding-noise level (e.g. log(a*b) vs log a + log b) count as holding.
_REL_TOL = 1e-9


class MultiIndex(tuple):
    """A d-tuple of positive integers: a box size, or a lattice point.

    Under the product order (see `leq_pi`) these form a directed set: any
    two indices of equal dimension have `join` as a common upper bound,
    even though for d >= 2 many pairs are incomparable.
    """

    __slots__ = ()

    def __new__(cls, coords: Iterable[int]) -> "MultiIndex":
        vals = tuple(operator.index(c) for c in coords)
        if not vals:
            raise ValueError("a MultiIndex needs at least one coordinate")
        if any(v < 1 for v in vals):
            raise ValueError(f"coordinates must be >= 1, got {vals}")
        return super().__new__(cls, vals)

    @property
    def dim(self) -> int:
        return len(self)

    @property
    def volume(self) -> int:
        return math.prod(self)

    def join(self, other: "MultiIndex") -> "MultiIndex":
        other = as_index(other, self.dim)
        return MultiIndex(max(a, b) for a, b in zip(self, other))

    def replace_coord(self, axis: int, value: int) -> "MultiIndex":
        return MultiIndex(self[:axis] + (value,) + self[axis + 1:])


def as_index(value, dim: int | None = None) -> MultiIndex:
    """Coerce an int (dimension 1) or any iterable of ints to a MultiIndex."""
    if isinstance(value, MultiIndex):
        idx = value
    elif isinstance(value, (int,)):
        idx = MultiIndex((value,))
    else:
        idx = MultiIndex(value)
    if dim is not None and idx.dim != dim:
        raise ValueError(f"expected dimension {dim}, got {tuple(idx)}")
    return idx


def leq_pi(x, y) -> bool:
    """Product-order comparison: true iff x_i <= y_i for every coordinate."""
    x = as_index(x)
    y = as_index(y, x.dim)
    return all(a <= b for a, b in zip(x, y))


class SubadditiveFn:
    """A nonnegative function on positive integer d-tuples.

    Coordinate-wise subadditivity is intended but never assumed: use
    `check_subadditivity` to test it.  The wrapped callable must be total
    on every box the caller evaluates.
    """

    def __init__(self, dim: int, fn: Callable[[MultiIndex], float], name: str = ""):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = dim
        self.fn = fn
        self.name = name

    def __call__(self, x) -> float:
        return float(self.fn(as_index(x, self.dim)))

    def __repr__(self):
        label = self.name or getattr(self.fn, "__name__", "fn")
        return f"SubadditiveFn(dim={self.dim}, {label})"

    @classmethod
    def from_table(cls, values: Mapping, name: str = "table") -> "SubadditiveFn":
        """Back the function by an explicit index -> value mapping.

        Evaluating an index absent from the table raises KeyError naming it.
        """
        if not values:
            raise ValueError("table must be nonempty")
        table = {}
        dim = None
        for key, val in values.items():
            idx = as_index(key)
            if dim is None:
                dim = idx.dim
            elif idx.dim != dim:
                raise ValueError(f"table keys mix dimensions ({dim} and {idx.dim})")
            table[idx] = float(val)

        def lookup(x: MultiIndex) -> float:
            try:
                return table[x]
            except KeyError:
                raise KeyError(f"table has no value at index {tuple(x)}") from None

        fn = cls(dim, lookup, name=name)
        fn.table = table
        return fn


@dataclass(frozen=True)
class Violation:
    """One failed instance of the coordinate subadditivity hypothesis.

    kind "subadditive": splitting coordinate `axis` (0-based) of `x` as
    x[axis] = x[axis] + y gave lhs > rhs.  kind "negative": f returned a
    value below zero at `x` (already outside the hypothesis); then axis
    is -1 and y/rhs are 0.
    """

    kind: str
    axis: int
    x: MultiIndex
    y: int
    lhs: float
    rhs: float


def subadditivity_triple_count(box) -> int:
    """Number of (axis, x, y) triples the exhaustive check would test in box."""
    box = as_index(box)
    total = 0
    for axis, side in enumerate(box):
        if side < 2:
            continue
        total += (side * (side - 1) // 2) * (box.volume // side)
    return total


def _iter_triples_exhaustive(box: MultiIndex):
    ranges = [range(1, side + 1) for side in box]
    for axis in range(box.dim):
        for coords in itertools.product(*ranges):
            room = box[axis] - coords[axis]
            for y in range(1, room + 1):
                yield axis, coords, y


def _iter_triples_sampled(box: MultiIndex, seed: int, samples: int):
    rng = random.Random(seed)
    axes = [j for j, side in enumerate(box) if side >= 2]
    if not axes:
        return
    for _ in range(samples):
        axis = rng.choice(axes)
        coords = [rng.randint(1, side) for side in box]
        coords[axis] = rng.randint(1, box[axis] - 1)
        y = rng.randint(1, box[axis] - coords[axis])
        yield axis, tuple(coords), y


def check_subadditivity(
    f: SubadditiveFn,
    box,
    exhaustive_limit: int = 10**6,
    seed: int = 0,
    samples: int = 10_000,
) -> list[Violation]:
    """Test the coordinate subadditivity inequality inside a box.

    Every tested triple (axis, x, y) satisfies x <= box coordinatewise and
    x[axis] + y <= box[axis].  The sweep is exhaustive when the triple
    count is at most `exhaustive_limit`; otherwise `samples` triples are
    drawn from a deterministic seeded generator.  Negative values of f are
    reported as their own violation kind.  Returns the empty list iff the
    inequality held (up to float rounding noise) on every tested triple.
    """
    box = as_index(box, f.dim)
    memo: dict[MultiIndex, float] = {}
    violations: list[Violation] = []

    def ev(pt: MultiIndex) -> float:
        val = memo.get(pt)
        if val is None:
            val = f(pt)
            memo[pt] = val
            if val < 0:
                violations.append(Violation("negative", -1, pt, 0, val, 0.0))
        return val

    if subadditivity_triple_count(box) <= exhaustive_limit:
        triples = _iter_triples_exhaustive(box)
    else:
        triples = _iter_triples_sampled(box, seed, samples)

    for axis, coords, y in triples:
        x = MultiIndex(coords)
        lhs = ev(x.replace_coord(axis, x[axis] + y))
        rhs = ev(x) + ev(x.replace_coord(axis, y))
        if lhs > rhs + _REL_TOL * max(1.0, abs(lhs), abs(rhs)):
            violations.append(Violation("subadditive", axis, x, y, lhs, rhs))
    return violations


def check_subadditivity_on_table(values: Mapping) -> list[Violation]:
    """Subadditivity check restricted to triples fully covered by a table.

    Tests every (axis, x, y) for which x, the y-variant and the sum-variant
    all appear as keys.  Useful for sparse user-supplied tables where
    evaluating off-table points is impossible.
    """
    f = values if isinstance(values, SubadditiveFn) else SubadditiveFn.from_table(values)
    table = f.table
    violations: list[Violation] = []
    for x, fx in table.items():
        if fx < 0:
            violations.append(Violation("negative", -1, x, 0, fx, 0.0))
    axis_max = [max(k[axis] for k in table) for axis in range(f.dim)]
    for x in table:
        for axis in range(f.dim):
            for y in range(1, axis_max[axis] - x[axis] + 1):
                other = x.replace_coord(axis, y)
                total = x.replace_coord(axis, x[axis] + y)
                if other in table and total in table:
                    lhs = table[total]
                    rhs = table[x] + table[other]
                    if lhs > rhs + _REL_TOL * max(1.0, abs(lhs), abs(rhs)):
                        violations.append(Violation("subadditive", axis, x, y, lhs, rhs))
    return violations


@dataclass(frozen=True)
class FeketeEstimate:
    """Summary of the ratios f(x)/volume(x) over a set of evaluated boxes.

    The directed-set limit of the ratio equals the infimum over *all*
    boxes, so `running_inf` (the least evaluated ratio) is a certified
    upper bound for the limit.  No finite evaluation set certifies a
    lower bound -- the data always extends to a subadditive function
    whose limit is 0 -- so the lower end of `bracket` is `tail_slope`,
    the gain of f per unit of added volume between the two largest nested
    boxes: an empirical estimate that converges to the limit whenever the
    per-box deviation f(x) - L*volume(x) flattens out.
    """

    evaluated_boxes: tuple[MultiIndex, ...]
    ratios: tuple[float, ...]
    running_inf: float
    last_ratio: float
    has_pi_maximum: bool
    tail_slope: float
    base: MultiIndex | None = None
    base_ratio: float | None = None

    @property
    def bracket_width(self) -> float:
        """Convergence gap between the largest box's ratio and the infimum."""
        return self.last_ratio - self.running_inf

    @property
    def bracket(self) -> tuple[float, float]:
        """(empirical lower end, certified upper end) enclosure of the limit."""
        return (min(self.tail_slope, self.running_inf), self.running_inf)


def _dedupe(boxes: Sequence[MultiIndex]) -> list[MultiIndex]:
    seen = set()
    out = []
    for b in boxes:
        if b not in seen:
            seen.add(b)
            out.append(b)
    return out


def running_infimum(f: SubadditiveFn, schedule: Sequence) -> FeketeEstimate:
    """Evaluate f over a schedule of boxes and track the infimum of ratios.

    `last_ratio` is taken at the schedule's product-order maximum; when the
    schedule has none (its coordinatewise join is absent), the
    lexicographically last box is used instead and `has_pi_maximum` is
    False.  Function values are memoized for the duration of the call.
    """
    boxes = _dedupe([as_index(b, f.dim) for b in schedule])
    if not boxes:
        raise ValueError("schedule must be nonempty")

    memo: dict[MultiIndex, float] = {}

    def ev(pt: MultiIndex) -> float:
        val = memo.get(pt)
        if val is None:
            val = f(pt)
            memo[pt] = val
        return val

    ratios = tuple(ev(b) / b.volume for b in boxes)
    running_inf = min(ratios)

    top = boxes[0]
    for b in boxes[1:]:
        top = top.join(b)
    if top in memo:
        last, has_max = top, True
    else:
        last, has_max = max(boxes), False
    last_ratio = ev(last) / last.volume

    below = [b for b in boxes if b != last and leq_pi(b, last)]
    if below:
        prev = max(below, key=lambda b: (b.volume, tuple(b)))
        gap = last.volume - prev.volume
        tail_slope = (ev(last) - ev(prev)) / gap if gap > 0 else last_ratio
    else:
        tail_slope = last_ratio

    return FeketeEstimate(
        evaluated_boxes=tuple(boxes),
        ratios=ratios,
        running_inf=running_inf,
        last_ratio=last_ratio,
        has_pi_maximum=has_max,
        tail_slope=tail_slope,
    )


def decomposition_bound(f: SubadditiveFn, t, x) -> float:
    """Upper bound on f(x) obtained by dividing each coordinate by t.

    Writes x_j = q_j * t_j + r_j with 1 <= r_j <= t_j (so r_j = t_j, not 0,
    when t_j divides x_j) and sums, over all 2^d choices S of coordinates
    kept at their remainder, the term (prod_{j not in S} q_j) * f(args)
    with args_j = t_j off S and r_j on S.  For a coordinatewise-subadditive
    f the result is >= f(x); with t = x it degenerates to f(x) exactly.
    Every tail term (S nonempty) is bounded by t_1*...*t_d * f(1,...,1).
    """
    t = as_index(t, f.dim)
    x = as_index(x, f.dim)
    qs = [(xj - 1) // tj for xj, tj in zip(x, t)]
    rs = [xj - qj * tj for xj, qj, tj in zip(x, qs, t)]
    total = 0.0
    for pick in itertools.product((0, 1), repeat=f.dim):
        coeff = math.prod(q for q, p in zip(qs, pick) if p == 0)
        if coeff == 0:
            continue
        args = MultiIndex(r if p else tj for tj, r, p in zip(t, rs, pick))
        total += coeff * f(args)
    return total


def fekete_limit_estimate(f: SubadditiveFn, base, growth_schedule: Sequence) -> FeketeEstimate:
    """Bracket the directed-set limit of f(x)/volume(x).

    Runs `running_infimum` over the growth schedule plus `base` and attaches
    the certified upper bound f(base)/volume(base) (the limit never exceeds
    the ratio at any fixed box).  Subadditivity is the caller's
    responsibility; this operation records ratios, it does not verify the
    hypothesis.
    """
    base = as_index(base, f.dim)
    est = running_infimum(f, list(growth_schedule) + [base])
    base_ratio = f(base) / base.volume
    return replace(est, base=base, base_ratio=base_ratio)


def diagonal_schedule(dim: int, k_max: int, k_min: int = 1) -> list[MultiIndex]:
    """Boxes (k, ..., k) for k = k_min .. k_max."""
    if k_min < 1 or k_max < k_min:
        raise ValueError("need 1 <= k_min <= k_max")
    return [MultiIndex((k,) * dim) for k in range(k_min, k_max + 1)]


def geometric_schedule(dim: int, steps: int, start: int = 1, factor: int = 2) -> list[MultiIndex]:
    """Boxes whose sides grow geometrically: (start * factor**i, ...)."""
    if start < 1 or factor < 2 or steps < 1:
        raise ValueError("need start >= 1, factor >= 2, steps >= 1")
    return [MultiIndex((start * factor**i,) * dim) for i in range(steps)]
