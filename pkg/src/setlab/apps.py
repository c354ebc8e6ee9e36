"""Encoders that translate set-system queries into three target problems
(range mode over a string, distances in a bipartite graph, pair sums over
two integer arrays), plus the baseline solvers and decision checkers used
to validate each translation end to end.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

from .core import CostMeter, ParameterError, SetSystem


# ---------------------------------------------------------------------------
# Range mode
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RangeModeEncoding:
    """Concatenation of two block strings over [u]: block i of the first half
    is (sorted complement of S_i) then (sorted S_i); the second half flips
    prefix and suffix.  a[i]/b[j] are the 1-based global indices where the
    prefix of block i (first half) / block j (second half) ends."""

    string: tuple[int, ...]
    a: tuple[int, ...]
    b: tuple[int, ...]
    m: int
    u: int


def rangemode_encode(sys: SetSystem) -> RangeModeEncoding:
    m, u = sys.m, sys.u
    first: list[int] = []
    second: list[int] = []
    a: list[int] = []
    b: list[int] = []
    full = list(range(1, u + 1))
    for i in range(1, m + 1):
        inside = list(sys.set_of(i))
        member = sys.members(i)
        outside = [e for e in full if e not in member]
        a.append((i - 1) * u + len(outside))
        first.extend(outside + inside)
        b.append(m * u + (i - 1) * u + len(inside))
        second.extend(inside + outside)
    return RangeModeEncoding(
        string=tuple(first + second), a=tuple(a), b=tuple(b), m=m, u=u
    )


def rangemode_query_range(enc: RangeModeEncoding, i: int, j: int):
    """Query window [lo, hi] (1-based, inclusive) and the mode-frequency
    threshold meaning 'the sets intersect'."""
    if not (1 <= i <= enc.m and 1 <= j <= enc.m):
        raise ParameterError(f"indices ({i}, {j}) out of range 1..{enc.m}")
    lo = enc.a[i - 1] + 1
    hi = enc.b[j - 1]
    threshold = enc.m - i + j + 1
    return (lo, hi), threshold


def brute_mode(string, lo: int, hi: int):
    """(mode element, frequency) of string[lo..hi], 1-based inclusive; ties go
    to the smallest element; an empty window has frequency 0."""
    if lo > hi:
        return None, 0
    counts: dict[int, int] = {}
    for c in string[lo - 1 : hi]:
        counts[c] = counts.get(c, 0) + 1
    best = min(counts, key=lambda e: (-counts[e], e))
    return best, counts[best]


def rangemode_decides_intersection(enc: RangeModeEncoding, i: int, j: int,
                                   mode_of=None) -> bool:
    """Decision rule: the sets intersect iff the mode frequency of the query
    window reaches m - i + j + 1."""
    (lo, hi), threshold = rangemode_query_range(enc, i, j)
    if lo > hi:
        return False
    if mode_of is None:
        _, freq = brute_mode(enc.string, lo, hi)
    else:
        _, freq = mode_of(lo, hi)
    return freq == threshold


def rangemode_membership_decision(enc: RangeModeEncoding, sys: SetSystem,
                                  i: int, j: int, mode_of=None) -> bool:
    """Fallback for mode queries that return only the element: the sets
    intersect iff the returned mode element belongs to both."""
    (lo, hi), _ = rangemode_query_range(enc, i, j)
    if lo > hi:
        return False
    if mode_of is None:
        elem, _ = brute_mode(enc.string, lo, hi)
    else:
        elem, _ = mode_of(lo, hi)
    return elem in sys.members(i) and elem in sys.members(j)


class RangeModeBaseline:
    """Block-decomposition range mode: a block-span mode table plus per-element
    occurrence lists; queries check the stored span mode and the elements of
    the two partial blocks, counting occurrences by binary search."""

    def __init__(self, string, block_count: int):
        self.string = tuple(string)
        n = len(self.string)
        if not 1 <= block_count <= max(n, 1):
            raise ParameterError(f"block count {block_count} outside 1..{n}")
        self.b = block_count
        self.block_len = math.ceil(n / block_count) if n else 1
        self.occ: dict[int, list[int]] = {}
        for pos, c in enumerate(self.string, start=1):
            self.occ.setdefault(c, []).append(pos)
        nb = math.ceil(n / self.block_len) if n else 0
        self.nblocks = nb
        # span_mode[s][t]: mode of blocks s..t (0-based), ties to smallest.
        self.span_mode: list[list[tuple[int, int]]] = []
        for s in range(nb):
            row = []
            counts: dict[int, int] = {}
            best, best_f = 0, 0
            for t in range(s, nb):
                for c in self.string[t * self.block_len : (t + 1) * self.block_len]:
                    counts[c] = counts.get(c, 0) + 1
                    if counts[c] > best_f or (counts[c] == best_f and c < best):
                        best, best_f = c, counts[c]
                row.append((best, best_f))
            self.span_mode.append(row)
        words = sum(len(v) for v in self.occ.values())  # occurrence lists
        words += len(self.string)  # the string itself
        words += 2 * sum(len(r) for r in self.span_mode)  # span table cells
        self.meter = CostMeter(words=words)

    def count(self, elem: int, lo: int, hi: int) -> int:
        positions = self.occ.get(elem, ())
        return bisect_right(positions, hi) - bisect_left(positions, lo)

    def query(self, lo: int, hi: int) -> tuple[int, int]:
        """Exact (mode element, frequency) of [lo, hi]; ties to the smallest."""
        self.meter.start_query()
        n = len(self.string)
        if not (1 <= lo <= hi <= n):
            raise ParameterError(f"empty or invalid range [{lo}, {hi}]")
        first_block = (lo - 1) // self.block_len
        last_block = (hi - 1) // self.block_len
        candidates = set()
        span_lo, span_hi = first_block + 1, last_block - 1
        if span_lo <= span_hi:
            candidates.add(self.span_mode[span_lo][span_hi - span_lo][0])
            head_end = span_lo * self.block_len
            tail_start = (span_hi + 1) * self.block_len + 1
            candidates.update(self.string[lo - 1 : head_end])
            candidates.update(self.string[tail_start - 1 : hi])
        else:
            candidates.update(self.string[lo - 1 : hi])
        best, best_f = 0, 0
        for c in sorted(candidates):
            self.meter.probe()
            f = self.count(c, lo, hi)
            if f > best_f:
                best, best_f = c, f
        return best, best_f

    def reporting(self, lo: int, hi: int) -> tuple[tuple[int, ...], int]:
        """All elements achieving the mode frequency, with that frequency.
        Desk-scale: counts every distinct element by binary search."""
        _, best_f = self.query(lo, hi)
        hits = tuple(
            c for c in sorted(self.occ) if self.count(c, lo, hi) == best_f
        )
        return hits, best_f


def rangemode_build_baseline(string, block_count: int) -> RangeModeBaseline:
    return RangeModeBaseline(string, block_count)


def rangemode_reporting(st: RangeModeBaseline, lo: int, hi: int):
    return st.reporting(lo, hi)


def rangemode_report_intersection(enc: RangeModeEncoding, st: RangeModeBaseline,
                                  i: int, j: int) -> tuple[int, ...]:
    """Reporting translation: the argmax set of the query window equals the
    intersection exactly when the mode frequency hits the threshold."""
    (lo, hi), threshold = rangemode_query_range(enc, i, j)
    if lo > hi:
        return ()
    hits, freq = st.reporting(lo, hi)
    return hits if freq == threshold else ()


# ---------------------------------------------------------------------------
# Distance oracle (bipartite graph)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BipartiteEncoding:
    """Set vertices on one side, element vertices on the other, one edge per
    set membership."""

    m: int
    u: int
    edges: int
    set_adj: tuple[tuple[int, ...], ...]      # set id (1-based) -> elements
    elem_adj: dict[int, tuple[int, ...]]      # element -> set ids

    @property
    def vertices(self) -> int:
        return self.m + self.u

    @property
    def average_degree(self) -> float:
        return 2 * self.edges / self.vertices if self.vertices else 0.0


def distoracle_encode(sys: SetSystem) -> BipartiteEncoding:
    elem_adj: dict[int, list[int]] = {}
    for i in range(1, sys.m + 1):
        for e in sys.set_of(i):
            elem_adj.setdefault(e, []).append(i)
    return BipartiteEncoding(
        m=sys.m,
        u=sys.u,
        edges=sys.N,
        set_adj=tuple(sys.sets),
        elem_adj={e: tuple(v) for e, v in elem_adj.items()},
    )


def bfs_distance(enc: BipartiteEncoding, i: int, j: int) -> float:
    """Exact shortest-path length between set vertices i and j (math.inf when
    disconnected).  Distance 2 means the sets share an element."""
    if not (1 <= i <= enc.m and 1 <= j <= enc.m):
        raise ParameterError(f"set vertices ({i}, {j}) out of range 1..{enc.m}")
    if i == j:
        return 0
    seen_sets = {i}
    seen_elems: set[int] = set()
    frontier_sets = [i]
    dist = 0
    while frontier_sets:
        next_elems = []
        for s in frontier_sets:
            for e in enc.set_adj[s - 1]:
                if e not in seen_elems:
                    seen_elems.add(e)
                    next_elems.append(e)
        dist += 1
        frontier_sets = []
        for e in next_elems:
            for s in enc.elem_adj.get(e, ()):
                if s == j:
                    return dist + 1
                if s not in seen_sets:
                    seen_sets.add(s)
                    frontier_sets.append(s)
        dist += 1
    return math.inf


# ---------------------------------------------------------------------------
# Pair-sum indexing over bit-block numbers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThreeSumEncoding:
    """Each membership (x in S_i) becomes one number per array: the first-array
    number packs (index i, zeros, x-1) into bit blocks of widths
    (w_m, w_m, w_u), the second packs (zeros, index j, u-x).  A pair sums to
    the query number of (i, j) exactly when both sides picked the same x."""

    A: tuple[int, ...]
    B: tuple[int, ...]
    w_m: int
    w_u: int
    m: int
    u: int
    m_pad: int
    u_pad: int

    @property
    def max_value(self) -> int:
        return max(self.A + self.B) if self.A else 0

    @property
    def bit_width(self) -> int:
        return self.max_value.bit_length()


def threesum_encode(sys: SetSystem) -> ThreeSumEncoding:
    m, u = sys.m, sys.u
    w_m = (max(m, 1) - 1).bit_length()  # ceil(log2 m), exactly, and 0 for m=1
    w_u = (max(u, 1) - 1).bit_length()
    m_pad, u_pad = 1 << w_m, 1 << w_u
    shift = m_pad * m_pad
    A: list[int] = []
    B: list[int] = []
    for i in range(1, m + 1):
        for x in sys.set_of(i):
            A.append(i + shift * (x - 1))
            B.append(m_pad * i + shift * (u - x))
    return ThreeSumEncoding(
        A=tuple(A), B=tuple(B), w_m=w_m, w_u=w_u, m=m, u=u, m_pad=m_pad, u_pad=u_pad
    )


def threesum_query_number(i: int, j: int, m: int, u: int) -> int:
    """Query number for the pair (i, j): blocks (i, j, u-1) under the padded
    block widths of an m-set, u-universe encoding."""
    if not (1 <= i <= m and 1 <= j <= m):
        raise ParameterError(f"indices ({i}, {j}) out of range 1..{m}")
    m_pad = 1 << (max(m, 1) - 1).bit_length()
    return i + m_pad * j + m_pad * m_pad * (u - 1)


def threesum_decode_a(enc: ThreeSumEncoding, value: int) -> tuple[int, int]:
    """(set index, element) encoded by a first-array number."""
    shift = enc.m_pad * enc.m_pad
    x = (value - 1) // shift + 1
    i = value - shift * (x - 1)
    if not (1 <= i <= enc.m and 1 <= x <= enc.u):
        raise ParameterError(f"value {value} does not decode to a membership")
    return i, x


def threesum_decode_b(enc: ThreeSumEncoding, value: int) -> tuple[int, int]:
    """(set index, element) encoded by a second-array number."""
    shift = enc.m_pad * enc.m_pad
    top = value // shift
    rem = value % shift
    if rem == 0:
        # Index block spilled into the top block (j equal to the pad width).
        j = enc.m_pad
        x = enc.u - (top - 1)
    else:
        j = rem // enc.m_pad
        x = enc.u - top
        if rem % enc.m_pad:
            raise ParameterError(f"value {value} does not decode to a membership")
    if not (1 <= j <= enc.m and 1 <= x <= enc.u):
        raise ParameterError(f"value {value} does not decode to a membership")
    return j, x


def threesum_indexing_solve(enc: ThreeSumEncoding, z: int):
    """First pair (a, b), a from A and b from B, with a + b = z, or None."""
    bset = frozenset(enc.B)
    for a in enc.A:
        if z - a in bset:
            return a, z - a
    return None


def threesum_indexing_report(enc: ThreeSumEncoding, z: int):
    """Every pair (a, b) with a + b = z, sorted."""
    bset = frozenset(enc.B)
    return sorted((a, z - a) for a in enc.A if z - a in bset)


def threesum_common_elements(enc: ThreeSumEncoding, i: int, j: int):
    """Decode the reported pairs for the (i, j) query number back to elements."""
    z = threesum_query_number(i, j, enc.m, enc.u)
    out = set()
    for a, b in threesum_indexing_report(enc, z):
        ia, x = threesum_decode_a(enc, a)
        jb, y = threesum_decode_b(enc, b)
        if ia == i and jb == j and x == y:
            out.add(x)
    return tuple(sorted(out))
