"""Cellular automata with finite neighbourhoods on Z^d.

An automaton is the quadruple (dimension, state count, ordered offset
list, rule table); the induced map on a finite rectangular support E
applies the local rule at every cell of E, reading states off the exact
Minkowski sum E+N.  All counting elsewhere anchors E at the origin,
which is harmless because image counts are translation invariant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .subadditive import MultiIndex, as_index

__all__ = [
    "CellularAutomaton",
    "RightPolytope",
    "Pattern",
    "Region",
    "encode_states",
    "decode_states",
    "bounding_sides",
    "minkowski_sum",
    "induced_map",
    "translate_support",
    "make_builtin",
    "BUILTIN_NAMES",
]

Cell = tuple[int, ...]


def encode_states(states: Sequence[int], q: int) -> int:
    """Big-endian base-q integer encoding; the first state is most significant."""
    code = 0
    for s in states:
        code = code * q + s
    return code


def decode_states(code: int, length: int, q: int) -> tuple[int, ...]:
    out = [0] * length
    for i in range(length - 1, -1, -1):
        code, out[i] = divmod(code, q)
    return tuple(out)


def _as_offset(vec, dim: int) -> Cell:
    if isinstance(vec, int):
        vec = (vec,)
    off = tuple(int(v) for v in vec)
    if len(off) != dim:
        raise ValueError(f"offset {off} does not have dimension {dim}")
    return off


@dataclass(frozen=True)
class CellularAutomaton:
    """dimension d, states 0..q-1, ordered neighbourhood offsets, rule table.

    The table entry at the big-endian base-q encoding of the neighbour
    states (in neighbourhood order) is the output state; the order of the
    offsets is significant and preserved exactly as given.
    """

    dimension: int
    state_count: int
    neighborhood: tuple[Cell, ...]
    rule_table: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        d = self.dimension
        q = self.state_count
        if d < 1:
            raise ValueError("dimension must be >= 1")
        if q < 2:
            raise ValueError("state count must be >= 2")
        offsets = tuple(_as_offset(v, d) for v in self.neighborhood)
        if not offsets:
            raise ValueError("neighborhood must be nonempty")
        if len(set(offsets)) != len(offsets):
            raise ValueError("neighborhood offsets must be pairwise distinct")
        table = tuple(int(v) for v in self.rule_table)
        if len(table) != q ** len(offsets):
            raise ValueError(
                f"rule table must have q^n = {q ** len(offsets)} entries, got {len(table)}"
            )
        if any(not 0 <= v < q for v in table):
            raise ValueError("rule table entries must be states in 0..q-1")
        object.__setattr__(self, "neighborhood", offsets)
        object.__setattr__(self, "rule_table", table)

    @property
    def neighborhood_size(self) -> int:
        return len(self.neighborhood)

    def apply_local(self, neighbor_states: Sequence[int]) -> int:
        """Look the rule up at the canonical encoding of the neighbour states."""
        states = tuple(neighbor_states)
        if len(states) != self.neighborhood_size:
            raise ValueError(
                f"expected {self.neighborhood_size} neighbour states, got {len(states)}"
            )
        if any(not 0 <= s < self.state_count for s in states):
            raise ValueError(f"states must lie in 0..{self.state_count - 1}")
        return self.rule_table[encode_states(states, self.state_count)]


@dataclass(frozen=True)
class RightPolytope:
    """Product of integer intervals {origin_i, ..., origin_i + sides_i - 1}."""

    sides: MultiIndex
    origin: Cell = None

    def __post_init__(self):
        sides = as_index(self.sides)
        origin = self.origin
        if origin is None:
            origin = (0,) * sides.dim
        origin = tuple(int(v) for v in origin)
        if len(origin) != sides.dim:
            raise ValueError("origin and sides must have equal dimension")
        object.__setattr__(self, "sides", sides)
        object.__setattr__(self, "origin", origin)

    @property
    def dim(self) -> int:
        return self.sides.dim

    @property
    def volume(self) -> int:
        return self.sides.volume

    def cells(self) -> list[Cell]:
        """All cells in row-major order (last coordinate varies fastest)."""
        ranges = [range(o, o + s) for o, s in zip(self.origin, self.sides)]
        return list(itertools.product(*ranges))

    def translate(self, vec) -> "RightPolytope":
        vec = _as_offset(vec, self.dim)
        return RightPolytope(self.sides, tuple(o + v for o, v in zip(self.origin, vec)))


def translate_support(E: RightPolytope, vec) -> RightPolytope:
    """Shift a support by a displacement vector (image counts do not change)."""
    return E.translate(vec)


@dataclass(frozen=True)
class Pattern:
    """States assigned to the cells of a box support, row-major.

    The canonical code is the big-endian base-q encoding of the cell
    sequence, a bijection onto 0 .. q^volume - 1.
    """

    support: RightPolytope
    cells: tuple[int, ...]

    def __post_init__(self):
        cells = tuple(int(v) for v in self.cells)
        if len(cells) != self.support.volume:
            raise ValueError(
                f"pattern has {len(cells)} cells, support volume is {self.support.volume}"
            )
        object.__setattr__(self, "cells", cells)

    def code(self, q: int) -> int:
        return encode_states(self.cells, q)

    @classmethod
    def from_code(cls, support: RightPolytope, code: int, q: int) -> "Pattern":
        if not 0 <= code < q**support.volume:
            raise ValueError(f"code {code} out of range for volume {support.volume}")
        return cls(support, decode_states(code, support.volume, q))

    def as_map(self) -> dict[Cell, int]:
        return dict(zip(self.support.cells(), self.cells))

    def grid_rows(self) -> list[tuple[int, ...]]:
        """Rows of length sides[-1]; one row for d = 1."""
        width = self.support.sides[-1]
        return [self.cells[i: i + width] for i in range(0, len(self.cells), width)]


@dataclass(frozen=True)
class Region:
    """Exact cell set of a Minkowski sum together with its tight bounding box."""

    hull: RightPolytope
    cells: tuple[Cell, ...]


def bounding_sides(neighborhood: Iterable) -> MultiIndex:
    """Sides of the tightest box containing the offsets: max - min + 1 per axis."""
    offsets = list(neighborhood)
    if not offsets:
        raise ValueError("neighborhood must be nonempty")
    dim = len(offsets[0]) if not isinstance(offsets[0], int) else 1
    offsets = [_as_offset(v, dim) for v in offsets]
    return MultiIndex(
        max(o[i] for o in offsets) - min(o[i] for o in offsets) + 1 for i in range(dim)
    )


def minkowski_sum(E: RightPolytope, neighborhood: Iterable) -> Region:
    """Exact cell set {x + v : x in E, v in N} plus its tight hull.

    The set is kept exact rather than padded to the hull: gaps in the
    neighbourhood leave cells of the hull untouched, and enumerating over
    them would multiply input counts by q per unused cell.
    """
    offsets = [_as_offset(v, E.dim) for v in neighborhood]
    cells = sorted(
        {tuple(x + v for x, v in zip(cell, off)) for cell in E.cells() for off in offsets}
    )
    lo = tuple(min(c[i] for c in cells) for i in range(E.dim))
    hi = tuple(max(c[i] for c in cells) for i in range(E.dim))
    hull = RightPolytope(MultiIndex(h - l + 1 for l, h in zip(lo, hi)), lo)
    return Region(hull=hull, cells=tuple(cells))


def induced_map(ca: CellularAutomaton, E: RightPolytope, inputs) -> Pattern:
    """Apply the local rule over every cell of E.

    `inputs` assigns a state to exactly the cells of E+N; a Pattern is
    accepted when its support's cell set matches the exact Minkowski sum.
    """
    region = minkowski_sum(E, ca.neighborhood)
    if isinstance(inputs, Pattern):
        inputs = inputs.as_map()
    if set(inputs) != set(region.cells):
        raise ValueError("input support must be exactly the cell set of E+N")
    q = ca.state_count
    if any(not 0 <= s < q for s in inputs.values()):
        raise ValueError(f"input states must lie in 0..{q - 1}")
    out = []
    for cell in E.cells():
        args = [inputs[tuple(c + v for c, v in zip(cell, off))] for off in ca.neighborhood]
        out.append(ca.rule_table[encode_states(args, q)])
    return Pattern(E, tuple(out))


def _identity_table(q: int) -> tuple[int, ...]:
    return tuple(range(q))


_BUILTINS = {
    "shift": lambda: CellularAutomaton(1, 2, ((1,),), _identity_table(2), name="shift"),
    "and1d": lambda: CellularAutomaton(1, 2, ((0,), (1,)), (0, 0, 0, 1), name="and1d"),
    "xor1d": lambda: CellularAutomaton(1, 2, ((0,), (1,)), (0, 1, 1, 0), name="xor1d"),
    "and2d": lambda: CellularAutomaton(
        2, 2, ((0, 0), (1, 0), (0, 1)), (0, 0, 0, 0, 0, 0, 0, 1), name="and2d"
    ),
}

BUILTIN_NAMES = tuple(sorted(_BUILTINS))


def make_builtin(name: str) -> CellularAutomaton:
    """shift (surjective), and1d (not), xor1d (surjective), and2d (2D test case)."""
    try:
        factory = _BUILTINS[name]
    except KeyError:
        raise ValueError(f"unknown builtin {name!r}; known: {', '.join(BUILTIN_NAMES)}") from None
    return factory()
