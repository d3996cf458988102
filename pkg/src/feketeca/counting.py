"""Exact reachable-pattern counting.

Two routes to the output size (number of distinct patterns an automaton
can produce on a box):

* brute force, any dimension: enumerate every input assignment on the
  exact E+N cell set, compute its image, count distinct canonical codes;
* a 1D image-automaton path: the sliding-window structure gives an
  edge-labelled de Bruijn graph whose label words are exactly the
  reachable patterns, and determinizing it by subsets makes the count a
  path count.

The two must agree wherever both run; they share no machinery.  Counts
are exact Python integers throughout (q^volume overflows fixed width at
modest sizes).  Orphan search and the classical 1D surjectivity decision
(an orphan word exists iff the empty subset is reachable from the full
one) live here too.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .ca import CellularAutomaton, Pattern, RightPolytope, minkowski_sum
from .subadditive import MultiIndex, as_index

__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "OutRecord",
    "OrphanCertificate",
    "Decision1D",
    "out_size_bruteforce",
    "out_size_transfer_1d",
    "find_orphan",
    "decide_surjectivity_1d",
]

DEFAULT_BUDGET = 1 << 30

# Largest enumeration (input count) the single-array 1D fast path may
# materialize; bigger jobs fall back to the chunked general path.
_FAST_1D_LIMIT = 1 << 24
_CHUNK = 1 << 20


class BudgetExceeded(Exception):
    """Raised instead of returning a partial answer; carries the exact cost."""

    def __init__(self, message: str, cost: int | None = None):
        super().__init__(message)
        self.cost = cost


@dataclass(frozen=True)
class OutRecord:
    """Exact output size at one support size.

    out_size counts distinct reachable patterns on the box; full_size is
    q^volume.  method records which route produced the count.
    """

    sides: MultiIndex
    out_size: int
    full_size: int
    method: str
    detail: str = ""


@dataclass(frozen=True)
class OrphanCertificate:
    """A pattern with no preimage: the canonical-code-minimal one at its size."""

    sides: MultiIndex
    pattern: Pattern


@dataclass(frozen=True)
class Decision1D:
    surjective: bool
    orphan_word: tuple[int, ...] | None


def _window_rule(ca: CellularAutomaton) -> tuple[int, int, np.ndarray]:
    """(span m, min offset, rule output per base-q code of a full m-window)."""
    offs = [o[0] for o in ca.neighborhood]
    mn, mx = min(offs), max(offs)
    m = mx - mn + 1
    q = ca.state_count
    win = np.arange(q**m, dtype=np.int64)
    digits = [(win // q ** (m - 1 - p)) % q for p in range(m)]
    nb = ca.neighborhood_size
    idx = np.zeros(q**m, dtype=np.int64)
    for i, off in enumerate(offs):
        idx += digits[off - mn] * q ** (nb - 1 - i)
    table = np.asarray(ca.rule_table, dtype=np.int64)
    return m, mn, table[idx]


def _image_codes_1d_fast(ca: CellularAutomaton, n: int) -> np.ndarray:
    """Output codes of all q^(n+m-1) window words, distinct and sorted.

    Builds the code arrays level by level, sharing prefixes: the output of
    a word is the output of its head shifted once, plus the rule applied
    to its last window.  Cells the neighbourhood skips never influence
    outputs, so counting over full windows equals counting over the exact
    E+N set.
    """
    q = ca.state_count
    m, _, wout = _window_rule(ca)
    out = wout
    for level in range(2, n + 1):
        out = np.repeat(out, q) * q + np.tile(wout, q ** (level - 1))
    return np.unique(out)


def _image_codes_general(
    ca: CellularAutomaton, E: RightPolytope, budget: int
) -> tuple[np.ndarray, str]:
    """Chunked enumeration over all assignments on the exact E+N cells."""
    region = minkowski_sum(E, ca.neighborhood)
    cells = region.cells
    pos = {c: i for i, c in enumerate(cells)}
    q = ca.state_count
    L = len(cells)
    cost = q**L
    nb = ca.neighborhood_size
    nbr_idx = [
        [pos[tuple(c + v for c, v in zip(cell, off))] for off in ca.neighborhood]
        for cell in E.cells()
    ]
    arg_weight = [q ** (nb - 1 - i) for i in range(nb)]
    col_div = [q ** (L - 1 - p) for p in range(L)]
    table = np.asarray(ca.rule_table, dtype=np.int64)

    parts = []
    chunks = 0
    for lo in range(0, cost, _CHUNK):
        hi = min(lo + _CHUNK, cost)
        codes = np.arange(lo, hi, dtype=np.int64)
        dig = np.empty((hi - lo, L), dtype=np.int8)
        for p in range(L):
            dig[:, p] = (codes // col_div[p]) % q
        out = np.zeros(hi - lo, dtype=np.int64)
        for idxs in nbr_idx:
            ridx = np.zeros(hi - lo, dtype=np.int64)
            for w, p in zip(arg_weight, idxs):
                ridx += dig[:, p].astype(np.int64) * w
            out = out * q + table[ridx]
        parts.append(np.unique(out))
        chunks += 1
    merged = parts[0] if chunks == 1 else np.unique(np.concatenate(parts))
    return merged, f"cells={L},chunks={chunks}"


def _image_codes(
    ca: CellularAutomaton, sides: MultiIndex, budget: int, origin=None
) -> tuple[np.ndarray, str]:
    E = RightPolytope(sides, origin)
    region = minkowski_sum(E, ca.neighborhood)
    q = ca.state_count
    cost = q ** len(region.cells)
    if cost > budget:
        raise BudgetExceeded(
            f"enumeration needs {cost} input patterns "
            f"({q}^{len(region.cells)}), budget is {budget}",
            cost=cost,
        )
    if q**E.volume > 1 << 62:
        raise BudgetExceeded(
            f"output codes ({q}^{E.volume}) exceed the 63-bit code width", cost=cost
        )
    if ca.dimension == 1 and E.origin == (0,):
        m, _, _ = _window_rule(ca)
        window_cost = q ** (sides[0] + m - 1)
        if window_cost <= min(budget, _FAST_1D_LIMIT):
            return _image_codes_1d_fast(ca, sides[0]), "fast-1d"
    return _image_codes_general(ca, E, budget)


def out_size_bruteforce(
    ca: CellularAutomaton, sides, budget: int = DEFAULT_BUDGET, origin=None
) -> OutRecord:
    """Exact output size by full enumeration; refuses (no partial answer)
    when the input count q^|E+N| exceeds the budget."""
    sides = as_index(sides, ca.dimension)
    codes, detail = _image_codes(ca, sides, budget, origin)
    return OutRecord(
        sides=sides,
        out_size=int(codes.size),
        full_size=ca.state_count**sides.volume,
        method="bruteforce",
        detail=detail,
    )


def find_orphan(
    ca: CellularAutomaton, sides, budget: int = DEFAULT_BUDGET, origin=None
) -> OrphanCertificate | None:
    """Canonical-code-minimal unreachable pattern at this size, if any.

    None means the induced map is surjective at this size.  Same cost
    bound as `out_size_bruteforce`.
    """
    sides = as_index(sides, ca.dimension)
    codes, _ = _image_codes(ca, sides, budget, origin)
    q = ca.state_count
    full = q**sides.volume
    if int(codes.size) == full:
        return None
    gaps = np.flatnonzero(codes != np.arange(codes.size, dtype=np.int64))
    missing = int(gaps[0]) if gaps.size else int(codes.size)
    pattern = Pattern.from_code(RightPolytope(sides, origin), missing, q)
    return OrphanCertificate(sides=sides, pattern=pattern)


class _ImageAutomaton1D:
    """Edge-labelled de Bruijn graph of a 1D rule, with subset stepping.

    Vertices are the q^(m-1) overlap words; reading one more input cell c
    moves u to (u+c)[1:] and emits the rule output of the full window u+c.
    Vertex sets are bit masks; stepping a mask by an output label is
    deterministic, so distinct label words correspond to paths in a
    subset DFA whose dead state is mask 0.
    """

    def __init__(self, ca: CellularAutomaton):
        if ca.dimension != 1:
            raise ValueError("image automaton requires dimension 1")
        q = ca.state_count
        m, _, wout = _window_rule(ca)
        n_states = q ** (m - 1)
        targets = [[0] * q for _ in range(n_states)]
        for u in range(n_states):
            for c in range(q):
                w_code = u * q + c
                label = int(wout[w_code])
                v = w_code % n_states  # drop the oldest cell
                targets[u][label] |= 1 << v
        self.q = q
        self.n_states = n_states
        self.full_mask = (1 << n_states) - 1
        self._targets = targets
        self._cache: dict[tuple[int, int], int] = {}

    def step(self, mask: int, label: int) -> int:
        key = (mask, label)
        nxt = self._cache.get(key)
        if nxt is None:
            nxt = 0
            targets = self._targets
            rest = mask
            while rest:
                low = rest & -rest
                nxt |= targets[low.bit_length() - 1][label]
                rest ^= low
            self._cache[key] = nxt
        return nxt


def out_size_transfer_1d(
    ca: CellularAutomaton, n_max: int, max_subsets: int = 1 << 16
) -> list[OutRecord]:
    """Exact output sizes for n = 1..n_max via the image automaton.

    Counts distinct label words of each length by dynamic programming
    over subset-DFA states, deduplicating per length; exact big-integer
    arithmetic.  Refuses if the live subset count ever exceeds
    max_subsets.
    """
    if ca.dimension != 1:
        raise ValueError("transfer counting requires dimension 1")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    auto = _ImageAutomaton1D(ca)
    q = ca.state_count
    counts: dict[int, int] = {auto.full_mask: 1}
    records = []
    for n in range(1, n_max + 1):
        nxt: dict[int, int] = {}
        for mask, cnt in counts.items():
            for label in range(q):
                t = auto.step(mask, label)
                if t:
                    nxt[t] = nxt.get(t, 0) + cnt
        counts = nxt
        if len(counts) > max_subsets:
            raise BudgetExceeded(
                f"subset construction reached {len(counts)} live subsets at n={n}, "
                f"cap is {max_subsets}",
                cost=len(counts),
            )
        records.append(
            OutRecord(
                sides=MultiIndex((n,)),
                out_size=sum(counts.values()),
                full_size=q**n,
                method="transfer1d",
                detail=f"subsets={len(counts)}",
            )
        )
    return records


def decide_surjectivity_1d(
    ca: CellularAutomaton, max_subsets: int = 1 << 20
) -> Decision1D:
    """Decide surjectivity of a 1D automaton; always terminates.

    Breadth-first search over vertex subsets starting from the full set:
    an orphan word exists iff the empty subset is reachable.  Labels are
    tried in ascending order, so the returned orphan word is the
    lexicographically least one of minimal length.
    """
    if ca.dimension != 1:
        raise ValueError("the exact decision procedure requires dimension 1")
    auto = _ImageAutomaton1D(ca)
    q = ca.state_count
    start = auto.full_mask
    parent: dict[int, tuple[int, int] | None] = {start: None}
    queue = deque([start])
    while queue:
        mask = queue.popleft()
        for label in range(q):
            t = auto.step(mask, label)
            if t == 0:
                word = [label]
                back = mask
                while parent[back] is not None:
                    back, lab = parent[back]
                    word.append(lab)
                word.reverse()
                return Decision1D(surjective=False, orphan_word=tuple(word))
            if t not in parent:
                parent[t] = (mask, label)
                queue.append(t)
                if len(parent) > max_subsets:
                    raise BudgetExceeded(
                        f"subset search visited {len(parent)} subsets, cap is {max_subsets}",
                        cost=len(parent),
                    )
    return Decision1D(surjective=True, orphan_word=None)
