"""Intersection-reporting structures with the words*query = N^2 tradeoff.

Three interchangeable reporters (answer matrix over large sets, a
frequency-split binary tree, and a heavy-hitter list with a residual
dictionary), a counting structure that returns intersection sizes, and a
hybrid dispatcher that sizes the output first and then routes the query.

Every structure answers ``query(i, j)`` identically to
``core.oracle_intersect`` and carries a CostMeter.
"""

from __future__ import annotations

import math

from .core import CostMeter, ParameterError, QueryResult, SetSystem


def _tables_words(sys: SetSystem) -> int:
    # One slot per stored element across all membership tables.
    return sys.N


def _scan_small(sys: SetSystem, small: int, big: int, meter: CostMeter) -> QueryResult:
    table = sys.members(big)
    out = []
    for e in sys.set_of(small):
        meter.probe()
        if e in table:
            out.append(e)
    return QueryResult(tuple(out))


class Alg1Structure:
    """Pairwise answer matrix over every set larger than r.

    Queries where one side has at most r elements scan that side against
    the other's membership table; everything else is a matrix lookup.
    """

    def __init__(self, sys: SetSystem, r: int):
        if r < 0:
            raise ParameterError(f"r must be >= 0, got {r}")
        self.sys = sys
        self.r = r
        self.big_ids = tuple(i for i in range(1, sys.m + 1) if sys.size_of(i) > r)
        big = set(self.big_ids)
        pairs: dict[tuple[int, int], list[int]] = {}
        occ = sys.occurrences()
        for e in sorted(occ):
            ids = [i for i in occ[e] if i in big]
            for a_idx, a in enumerate(ids):
                for b in ids[a_idx:]:
                    pairs.setdefault((a, b), []).append(e)
        self.M = {key: tuple(v) for key, v in pairs.items()}
        for a_idx, a in enumerate(self.big_ids):
            for b in self.big_ids[a_idx:]:
                self.M.setdefault((a, b), ())
        p = len(self.big_ids)
        cells = p * (p + 1) // 2
        content = sum(len(v) for v in self.M.values())
        self.meter = CostMeter(words=_tables_words(sys) + cells + content)

    def query(self, i: int, j: int) -> QueryResult:
        self.meter.start_query()
        a, b = self.sys.set_of(i), self.sys.set_of(j)
        if min(len(a), len(b)) <= self.r:
            small, big = (i, j) if len(a) <= len(b) else (j, i)
            return _scan_small(self.sys, small, big, self.meter)
        key = (i, j) if i <= j else (j, i)
        self.meter.probe()
        res = self.M[key]
        self.meter.probe(len(res))
        return QueryResult(res)


def build_alg1(sys: SetSystem, r: int) -> Alg1Structure:
    return Alg1Structure(sys, r)


class _Alg2Node:
    __slots__ = ("level", "thr", "views", "surviving", "matrix", "kept", "left", "right", "bottom")

    def __init__(self, level: int, thr: float, bottom: bool):
        self.level = level
        self.thr = thr
        self.bottom = bottom
        self.views: dict[int, tuple[int, ...]] = {}
        self.surviving: frozenset = frozenset()
        self.matrix: dict = {}
        self.kept: int | None = None
        self.left: _Alg2Node | None = None
        self.right: _Alg2Node | None = None

    def words(self) -> int:
        w = sum(len(v) for v in self.views.values())
        p = len(self.surviving)
        w += p * (p + 1) // 2
        if self.bottom:
            w += sum(len(v) for v in self.matrix.values())
        if self.kept is not None:
            w += 1
        return w


class Alg2Structure:
    """Binary tree over the large sets with frequency-balanced element splits.

    Each level halves the surviving-size threshold; inner nodes store
    disjointness bits for the restricted sets, the bottom level stores the
    restricted intersections outright, and the element the split pivots on
    is kept (and reported from) the node itself.
    """

    def __init__(self, sys: SetSystem, r: int):
        if r < 1:
            raise ParameterError(f"r must be >= 1, got {r}")
        self.sys = sys
        self.r = r
        self.levels = r.bit_length()  # floor(log2 r) + 1
        self._bottom_level = self.levels - 1
        top = [i for i in range(1, sys.m + 1) if sys.size_of(i) > r]
        views = {i: sys.set_of(i) for i in top}
        self.root = self._build(views, 0)
        words = _tables_words(sys)
        stack = [self.root]
        while stack:
            node = stack.pop()
            words += node.words()
            if node.left is not None:
                stack.extend((node.left, node.right))
        self.meter = CostMeter(words=words)

    def _build(self, views: dict[int, tuple[int, ...]], level: int) -> _Alg2Node:
        thr = self.r / (1 << level)
        bottom = level == self._bottom_level
        node = _Alg2Node(level, thr, bottom)
        node.views = views
        if level == 0:
            surviving = sorted(views)
        else:
            surviving = sorted(i for i, v in views.items() if len(v) >= thr)
        node.surviving = frozenset(surviving)
        for a_idx, a in enumerate(surviving):
            va = views[a]
            for b in surviving[a_idx:]:
                vb_set = frozenset(views[b])
                common = tuple(e for e in va if e in vb_set)
                node.matrix[(a, b)] = common if bottom else not common
        if not bottom and surviving:
            freq: dict[int, int] = {}
            for i in surviving:
                for e in views[i]:
                    freq[e] = freq.get(e, 0) + 1
            elems = sorted(freq)
            mass = sum(freq.values())
            cum = 0
            z = 0
            for e in elems:
                if cum + freq[e] > mass / 2:
                    break
                cum += freq[e]
                z += 1
            node.kept = elems[z] if z < len(elems) else None
            left_set = frozenset(elems[:z])
            right_set = frozenset(elems[z + 1 :])
            left_views = {
                i: tuple(e for e in views[i] if e in left_set) for i in surviving
            }
            right_views = {
                i: tuple(e for e in views[i] if e in right_set) for i in surviving
            }
            node.left = self._build(left_views, level + 1)
            node.right = self._build(right_views, level + 1)
        return node

    def query(self, i: int, j: int) -> QueryResult:
        self.meter.start_query()
        sys = self.sys
        if min(sys.size_of(i), sys.size_of(j)) <= self.r:
            small, big = (i, j) if sys.size_of(i) <= sys.size_of(j) else (j, i)
            return _scan_small(sys, small, big, self.meter)
        acc: list[int] = []
        self._visit(self.root, i, j, acc)
        return QueryResult(tuple(sorted(acc)))

    def _visit(self, node: _Alg2Node, i: int, j: int, acc: list[int]) -> None:
        if i not in node.surviving or j not in node.surviving:
            # Stopper node: scan the smaller restricted set.
            vi, vj = node.views[i], node.views[j]
            small_view, other = (vi, j) if len(vi) <= len(vj) else (vj, i)
            table = self.sys.members(other)
            for e in small_view:
                self.meter.probe()
                if e in table:
                    acc.append(e)
            return
        key = (i, j) if i <= j else (j, i)
        self.meter.probe()
        entry = node.matrix[key]
        if node.bottom:
            self.meter.probe(len(entry))
            acc.extend(entry)
            return
        if entry:  # disjoint bit set: nothing below this node
            return
        if node.kept is not None:
            self.meter.probe()
            if node.kept in self.sys.members(i):
                self.meter.probe()
                if node.kept in self.sys.members(j):
                    acc.append(node.kept)
        self._visit(node.left, i, j, acc)
        self._visit(node.right, i, j, acc)


def build_alg2(sys: SetSystem, r: int) -> Alg2Structure:
    return Alg2Structure(sys, r)


class Alg3Structure:
    """Heavy-hitter list of the r most frequent elements plus a residual
    dictionary holding each nonempty pairwise intersection minus the list.

    Frequency ties break toward the smaller element so the list is
    deterministic.
    """

    def __init__(self, sys: SetSystem, r: int):
        if r < 0:
            raise ParameterError(f"r must be >= 0, got {r}")
        self.sys = sys
        self.r = r
        occ = sys.occurrences()
        order = sorted(occ, key=lambda e: (-len(occ[e]), e))
        self.L = tuple(order[:r])
        lset = frozenset(self.L)
        self._lset = lset
        pairs: dict[tuple[int, int], list[int]] = {}
        for e in sorted(occ):
            if e in lset:
                continue
            ids = occ[e]
            for a_idx, a in enumerate(ids):
                for b in ids[a_idx + 1 :]:
                    pairs.setdefault((a, b), []).append(e)
        self.D = {key: tuple(v) for key, v in pairs.items()}
        words = (
            _tables_words(sys)
            + len(self.L)
            + len(self.D)
            + sum(len(v) for v in self.D.values())
        )
        self.meter = CostMeter(words=words)

    def query(self, i: int, j: int) -> QueryResult:
        self.meter.start_query()
        if i == j:
            res = self.sys.set_of(i)
            self.meter.probe(len(res))
            return QueryResult(res)
        ti, tj = self.sys.members(i), self.sys.members(j)
        hits = []
        for e in self.L:
            self.meter.probe()
            if e in ti:
                self.meter.probe()
                if e in tj:
                    hits.append(e)
        key = (i, j) if i <= j else (j, i)
        self.meter.probe()
        residual = self.D.get(key, ())
        self.meter.probe(len(residual))
        return QueryResult(tuple(sorted(hits + list(residual))))


def build_alg3(sys: SetSystem, r: int) -> Alg3Structure:
    return Alg3Structure(sys, r)


class SdCountStructure:
    """Intersection-size matrix for every pair of sets larger than T; smaller
    queries count matches by scanning the small side."""

    def __init__(self, sys: SetSystem, T: int):
        if T < 0:
            raise ParameterError(f"T must be >= 0, got {T}")
        self.sys = sys
        self.T = T
        big = set(i for i in range(1, sys.m + 1) if sys.size_of(i) > T)
        counts: dict[tuple[int, int], int] = {}
        occ = sys.occurrences()
        for e, ids_all in occ.items():
            ids = [i for i in ids_all if i in big]
            for a_idx, a in enumerate(ids):
                for b in ids[a_idx:]:
                    counts[(a, b)] = counts.get((a, b), 0) + 1
        self.counts = counts
        self.meter = CostMeter(words=_tables_words(sys) + len(counts))

    def query(self, i: int, j: int) -> int:
        self.meter.start_query()
        sys = self.sys
        if i == j:
            self.meter.probe()
            return sys.size_of(i)
        if min(sys.size_of(i), sys.size_of(j)) <= self.T:
            small, big = (i, j) if sys.size_of(i) <= sys.size_of(j) else (j, i)
            table = sys.members(big)
            count = 0
            for e in sys.set_of(small):
                self.meter.probe()
                if e in table:
                    count += 1
            return count
        key = (i, j) if i <= j else (j, i)
        self.meter.probe()
        return self.counts.get(key, 0)


def build_sd_count(sys: SetSystem, T: int) -> SdCountStructure:
    return SdCountStructure(sys, T)


def _fit_param(build, budget: int, hi: int):
    """Smallest parameter in {0, 1, 2, 4, ...} whose structure fits budget.

    Structure words are non-increasing in the threshold parameter.
    """
    candidates = [0]
    v = 1
    while v < hi:
        candidates.append(v)
        v *= 2
    candidates.append(hi)
    best = None
    for param in candidates:
        st = build(param)
        if st.meter.words <= budget:
            best = st
            break
    return best


class HybridStructure:
    """Output-size-aware dispatcher: a counting structure sizes the answer,
    small outputs are served by a direct sorted merge of the two sets, and
    large outputs go to a reporter built to the same space budget.

    The small-output threshold is N^(t/(1-t)) with t derived from the
    budget via budget = N^(2-2t); it stays configurable so a plug-in
    replacement for the merge path can be benchmarked.
    """

    def __init__(self, sys: SetSystem, space_budget: int, out_threshold: float | None = None):
        self.sys = sys
        self.space_budget = space_budget
        sizer = _fit_param(lambda T: SdCountStructure(sys, T), space_budget, max(sys.N, 1))
        reporter = _fit_param(lambda r: Alg3Structure(sys, r), space_budget, max(sys.N, 1))
        if sizer is None or reporter is None:
            raise ParameterError(
                f"space budget {space_budget} cannot hold the instance tables"
            )
        self.sizer = sizer
        self.reporter = reporter
        if out_threshold is None:
            n = max(sys.N, 2)
            t = 1.0 - math.log(max(space_budget, 1)) / (2.0 * math.log(n))
            t = min(0.5, max(0.0, t))
            out_threshold = n ** (t / (1.0 - t)) if t < 1.0 else float(n)
        self.out_threshold = out_threshold
        self.dispatch_counts = {"merge": 0, "reporter": 0}
        self.last_path: str | None = None
        self.meter = CostMeter(words=self.sizer.meter.words + self.reporter.meter.words)

    def query(self, i: int, j: int, force_path: str | None = None) -> QueryResult:
        self.meter.start_query()
        out_size = self.sizer.query(i, j)
        self.meter.inner_query()
        self.meter.probe(self.sizer.meter.probes)
        if force_path is None:
            path = "merge" if out_size < self.out_threshold else "reporter"
        else:
            if force_path not in ("merge", "reporter"):
                raise ParameterError(f"unknown path {force_path!r}")
            path = force_path
        self.dispatch_counts[path] += 1
        self.last_path = path
        if path == "merge":
            res = self._merge(i, j)
        else:
            res = self.reporter.query(i, j)
            self.meter.probe(self.reporter.meter.probes)
        return res

    def _merge(self, i: int, j: int) -> QueryResult:
        a, b = self.sys.set_of(i), self.sys.set_of(j)
        out = []
        x = y = 0
        while x < len(a) and y < len(b):
            self.meter.probe()
            if a[x] == b[y]:
                out.append(a[x])
                x += 1
                y += 1
            elif a[x] < b[y]:
                x += 1
            else:
                y += 1
        return QueryResult(tuple(out))


def build_hybrid(sys: SetSystem, space_budget: int, out_threshold: float | None = None) -> HybridStructure:
    return HybridStructure(sys, space_budget, out_threshold)
