"""Pair-sum indexing over two integer arrays via bucketed characteristic
vectors and hybrid quad trees.

The two arrays are split into buckets by an additive hash, each bucket gets
a characteristic vector under a second additive hash, and each bucket pair
gets a quad tree over window pairs of those vectors.  Upper tree levels
store window convolutions outright; the bottom levels answer "is this
convolution position nonzero" through set-disjointness instances built from
shifted copies of the windows; leaves recover original elements and finish
with a sorted two-pointer scan.  Any returned pair is verified
arithmetically, so hash collisions (false witnesses) only cost time.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .core import ParameterError, SetSystem
from .hashing import ModPrimeHash, random_prime


@dataclass
class QueryCounters:
    """Per-query-scope counters; merge after the fact when sharing work."""

    sd_queries: int = 0
    si_queries: int = 0
    false_witnesses: int = 0
    probes: int = 0

    def merge(self, other: "QueryCounters") -> None:
        self.sd_queries += other.sd_queries
        self.si_queries += other.si_queries
        self.false_witnesses += other.false_witnesses
        self.probes += other.probes


@dataclass
class BucketedArrays:
    """R buckets per side plus overflow lists for bucket mass above 3n/R."""

    R: int
    cap: int
    buckets_a: list[list[int]]
    buckets_b: list[list[int]]
    overflow_a: list[int]
    overflow_b: list[int]
    sorted_a: list[int]
    sorted_b: list[int]
    set_a: frozenset
    set_b: frozenset


def bucketize(A, B, R: int, h1) -> BucketedArrays:
    """Route each element to bucket h1(x); buckets keep at most floor(3n/R)
    elements (in arrival order) and spill the excess to the overflow lists."""
    if R < 1:
        raise ParameterError(f"R must be >= 1, got {R}")
    n = max(len(A), len(B))
    cap = (3 * n) // R
    buckets_a: list[list[int]] = [[] for _ in range(R)]
    buckets_b: list[list[int]] = [[] for _ in range(R)]
    overflow_a: list[int] = []
    overflow_b: list[int] = []
    for x in A:
        bucket = buckets_a[h1(x) % R]
        if len(bucket) < cap:
            bucket.append(x)
        else:
            overflow_a.append(x)
    for y in B:
        bucket = buckets_b[h1(y) % R]
        if len(bucket) < cap:
            bucket.append(y)
        else:
            overflow_b.append(y)
    return BucketedArrays(
        R=R,
        cap=cap,
        buckets_a=buckets_a,
        buckets_b=buckets_b,
        overflow_a=overflow_a,
        overflow_b=overflow_b,
        sorted_a=sorted(A),
        sorted_b=sorted(B),
        set_a=frozenset(A),
        set_b=frozenset(B),
    )


@dataclass
class CharVector:
    """Bit vector marking occupied hash positions, with a recovery multimap
    from position back to the bucket elements hashing there."""

    bits: tuple[int, ...]
    recovery: dict[int, tuple[int, ...]]

    def ones(self) -> list[int]:
        return [p for p, bit in enumerate(self.bits) if bit]


def char_vector(bucket, h2, n: int) -> CharVector:
    """Length-n characteristic vector of a bucket under h2 (range must be n);
    collisions within a bucket fold into one position with multi-entry recovery."""
    if getattr(h2, "range_size", n) != n:
        raise ParameterError(f"h2 range {h2.range_size} != vector length {n}")
    bits = [0] * n
    rec: dict[int, list[int]] = {}
    for x in bucket:
        p = h2(x) % n
        bits[p] = 1
        rec.setdefault(p, []).append(x)
    return CharVector(tuple(bits), {p: tuple(v) for p, v in rec.items()})


def convolve(v, w) -> list[int]:
    """Exact integer convolution, c[k] = sum_i v[i]*w[k-i]; the shorter input
    is zero-padded so both sides have equal length."""
    v = list(v)
    w = list(w)
    if not v and not w:
        return []
    size = max(len(v), len(w))
    v += [0] * (size - len(v))
    w += [0] * (size - len(w))
    return [int(x) for x in np.convolve(np.array(v, dtype=np.int64), np.array(w, dtype=np.int64))]


class ShiftSetInstance:
    """Shifted-window sets that turn convolution-position-nonzero probes into
    set-disjointness queries.

    An A-side entry contributes its reversal shifted by s in [0, ceil(sqrt(Z)))
    and a B-side entry contributes shifts Z-1-t*ceil(sqrt(Z)) over the t range
    covering every convolution index; positions falling outside [0, 2Z-2] are
    clamped away (they cannot meet the other side).  Position j pairs the
    A-entry's (j mod q)-shift with the B-entry's floor(j/q)-shift.
    """

    def __init__(self, Z: int, a_entries, b_entries):
        if Z < 1:
            raise ParameterError(f"Z must be >= 1, got {Z}")
        self.Z = Z
        self.q = max(1, math.isqrt(Z) + (0 if math.isqrt(Z) ** 2 == Z else 1))
        self.t_max = (2 * Z - 2) // self.q
        sets: list[list[int]] = []
        self.a_ids: dict = {}
        self.b_ids: dict = {}
        hi = 2 * Z - 2
        for key, ones in a_entries:
            rev = [Z - 1 - p for p in ones]
            for s in range(self.q):
                self.a_ids[(key, s)] = len(sets) + 1
                sets.append(sorted(p + s for p in rev if 0 <= p + s <= hi))
        for key, ones in b_entries:
            for t in range(self.t_max + 1):
                shift = Z - 1 - t * self.q
                self.b_ids[(key, t)] = len(sets) + 1
                sets.append(sorted(p + shift for p in ones if 0 <= p + shift <= hi))
        self.sys = SetSystem(2 * Z - 1, [[p + 1 for p in s] for s in sets])
        self._frozen = [frozenset(s) for s in self.sys.sets]
        self.a_entry_count = len(a_entries)
        self.b_entry_count = len(b_entries)

    def default_sd_query(self, ia: int, ib: int) -> bool:
        """Disjointness of two internal sets (1-based ids)."""
        sa, sb = self._frozen[ia - 1], self._frozen[ib - 1]
        if len(sa) > len(sb):
            sa, sb = sb, sa
        return not any(e in sb for e in sa)

    def pair_ids(self, a_key, b_key, j: int) -> tuple[int, int]:
        if not 0 <= j <= 2 * self.Z - 2:
            raise ParameterError(f"position {j} outside [0, {2 * self.Z - 2}]")
        return self.a_ids[(a_key, j % self.q)], self.b_ids[(b_key, j // self.q)]

    def intersect_positions(self, a_key, b_key, j: int, si_query=None) -> list[int]:
        """0-based frame positions common to the two sets selected by j."""
        ia, ib = self.pair_ids(a_key, b_key, j)
        if si_query is not None:
            vals = si_query(ia, ib)
        else:
            sa, sb = self._frozen[ia - 1], self._frozen[ib - 1]
            vals = sorted(sa & sb)
        return [v - 1 for v in vals]

    def decode_position(self, j: int, frame_pos: int) -> tuple[int, int]:
        """Window-local (a_pos, b_pos) encoded by a common frame position."""
        s = j % self.q
        t = j // self.q
        a_pos = self.Z - 1 + s - frame_pos
        b_pos = frame_pos - (self.Z - 1 - t * self.q)
        return a_pos, b_pos


def build_shift_sets(a_subvectors, b_subvectors, Z: int) -> ShiftSetInstance:
    """Shift-set instance for plain length-Z sub-vectors, indexed 0.. per side."""
    def entries(subs):
        out = []
        for k, bits in enumerate(subs):
            bits = list(bits)
            if len(bits) != Z:
                raise ParameterError(f"sub-vector {k} has length {len(bits)} != {Z}")
            out.append((k, tuple(p for p, b in enumerate(bits) if b)))
        return out

    return ShiftSetInstance(Z, entries(a_subvectors), entries(b_subvectors))


def conv_position_nonzero(inst: ShiftSetInstance, a_id, b_id, j: int, sd_query=None,
                          counters: QueryCounters | None = None) -> bool:
    """True iff the convolution of the two underlying sub-vectors is nonzero
    at index j.  Issues exactly one disjointness query."""
    ia, ib = inst.pair_ids(a_id, b_id, j)
    if counters is not None:
        counters.sd_queries += 1
    disjoint = (sd_query or inst.default_sd_query)(ia, ib)
    return not disjoint


def twosum_scan(sorted_a, sorted_b, z, counters: QueryCounters | None = None):
    """All pairs (x, y), x from the first array and y from the second, with
    x + y = z.  Inputs must be sorted ascending; duplicate runs are handled."""
    pairs = []
    i = len(sorted_a) - 1
    j = 0
    while i >= 0 and j < len(sorted_b):
        if counters is not None:
            counters.probes += 1
        s = sorted_a[i] + sorted_b[j]
        if s == z:
            ra = 1
            while i - ra >= 0 and sorted_a[i - ra] == sorted_a[i]:
                ra += 1
            rb = 1
            while j + rb < len(sorted_b) and sorted_b[j + rb] == sorted_b[j]:
                rb += 1
            for da in range(ra):
                for db in range(rb):
                    pairs.append((sorted_a[i - da], sorted_b[j + db]))
            i -= ra
            j += rb
        elif s > z:
            i -= 1
        else:
            j += 1
    return pairs


def _snap_exp(x: float) -> int:
    r = round(x)
    if abs(x - r) < 1e-9:
        return int(r)
    return int(round(x))


@dataclass(frozen=True)
class LevelPlan:
    """Sub-vector lengths per region of the tree: explicit levels run from the
    padded root length down to E ~ X^(1+eps); the ceil(2*eps*log2 X) implicit
    levels run E, E/2, ...; the leaf holds recovery data at E >> k ~ X^(1-eps)."""

    n2: int
    E: int
    k: int
    leaf: int

    @property
    def explicit_lengths(self) -> tuple[int, ...]:
        out = []
        size = self.n2
        while size >= self.E:
            out.append(size)
            size //= 2
        return tuple(out)

    @property
    def implicit_lengths(self) -> tuple[int, ...]:
        return tuple(self.E >> i for i in range(self.k))


def make_level_plan(n: int, X: int, eps: float) -> LevelPlan:
    if X < 1:
        raise ParameterError(f"X must be >= 1, got {X}")
    if eps < 0:
        raise ParameterError(f"eps must be >= 0, got {eps}")
    n2 = 1
    while n2 < max(n, 1):
        n2 *= 2
    lx = math.log2(X) if X > 1 else 0.0
    E = 1 << max(0, _snap_exp((1 + eps) * lx))
    E = max(1, min(E, n2))
    k = math.ceil(2 * eps * lx - 1e-9) if X > 1 else 0
    k = max(0, min(k, E.bit_length() - 1))
    return LevelPlan(n2=n2, E=E, k=k, leaf=E >> k)


def _pad_bits(bits, n2: int) -> tuple[int, ...]:
    out = list(bits) + [0] * (n2 - len(bits))
    return tuple(out)


def _window_groups(bits, Z: int, cap: int):
    """Ones of each Z-length window split into consecutive groups of <= cap.

    Returns {window: [group, ...]} with groups as window-local position
    tuples; windows get a single (possibly empty) group unless they exceed
    the cap, in which case duplicates are created.
    """
    cap = max(1, cap)
    groups: dict[int, list[tuple[int, ...]]] = {}
    nwin = len(bits) // Z
    for w in range(nwin):
        local = [p for p in range(Z) if bits[w * Z + p]]
        if len(local) <= cap:
            groups[w] = [tuple(local)]
        else:
            groups[w] = [tuple(local[i : i + cap]) for i in range(0, len(local), cap)]
    return groups


class HybridQuadTree:
    """Quad tree over window pairs of two characteristic vectors.

    ``a_key``/``b_key`` tag the shift-set entries when the instances are
    shared across bucket pairs; the standalone builder uses key 0.
    """

    def __init__(self, plan: LevelPlan, bits_a, bits_b, recovery_a, recovery_b,
                 X: int, R: int, shift_levels=None, a_key=0, b_key=0):
        self.plan = plan
        self.X = X
        self.R = R
        self.a_key = a_key
        self.b_key = b_key
        self.bits_a = _pad_bits(bits_a, plan.n2)
        self.bits_b = _pad_bits(bits_b, plan.n2)
        self._arr_a = np.array(self.bits_a, dtype=np.int64)
        self._arr_b = np.array(self.bits_b, dtype=np.int64)
        self.conv: dict[tuple[int, int, int], np.ndarray] = {}
        for size in plan.explicit_lengths:
            nwin = plan.n2 // size
            for wa in range(nwin):
                va = self._arr_a[wa * size : (wa + 1) * size]
                for wb in range(nwin):
                    vb = self._arr_b[wb * size : (wb + 1) * size]
                    self.conv[(size, wa, wb)] = np.convolve(va, vb)
        if shift_levels is None:
            shift_levels = {}
            for Z in plan.implicit_lengths:
                cap = math.ceil(Z / R)
                ga = _window_groups(self.bits_a, Z, cap)
                gb = _window_groups(self.bits_b, Z, cap)
                a_entries = [((a_key, w, gi), grp) for w, grps in ga.items() for gi, grp in enumerate(grps)]
                b_entries = [((b_key, w, gi), grp) for w, grps in gb.items() for gi, grp in enumerate(grps)]
                inst = ShiftSetInstance(Z, a_entries, b_entries)
                shift_levels[Z] = (
                    inst,
                    {(a_key, w): [(a_key, w, gi) for gi in range(len(grps))] for w, grps in ga.items()},
                    {(b_key, w): [(b_key, w, gi) for gi in range(len(grps))] for w, grps in gb.items()},
                )
        self.shift_levels = shift_levels
        leaf_cap = max(1, math.ceil(X / R))
        self.leaf_a = self._leaf_entries(self.bits_a, recovery_a, leaf_cap)
        self.leaf_b = self._leaf_entries(self.bits_b, recovery_b, leaf_cap)

    def _leaf_entries(self, bits, recovery, cap):
        size = self.plan.leaf
        groups = _window_groups(bits, size, cap)
        out: dict[int, list[list[tuple[int, int]]]] = {}
        for w, grps in groups.items():
            lists = []
            for grp in grps:
                vals = []
                for local in grp:
                    gpos = w * size + local
                    for x in recovery.get(gpos, ()):
                        vals.append((x, gpos))
                vals.sort()
                lists.append(vals)
            out[w] = lists
        return out

    # ---- probes ----------------------------------------------------------

    def explicit_nonzero(self, size: int, wa: int, wb: int, local: int) -> bool:
        return int(self.conv[(size, wa, wb)][local]) > 0

    def implicit_nonzero(self, Z: int, wa: int, wb: int, local: int,
                         counters: QueryCounters | None = None) -> bool:
        inst, amap, bmap = self.shift_levels[Z]
        for ka in amap.get((self.a_key, wa), ()):
            for kb in bmap.get((self.b_key, wb), ()):
                if conv_position_nonzero(inst, ka, kb, local, counters=counters):
                    return True
        return False

    def window_bits(self, side: str, size: int, w: int) -> tuple[int, ...]:
        bits = self.bits_a if side == "a" else self.bits_b
        return bits[w * size : (w + 1) * size]

    # ---- search ----------------------------------------------------------

    def _leaf_scan(self, wa: int, wb: int, g: int, z: int,
                   counters: QueryCounters, want_all: bool):
        pairs = []
        for av in self.leaf_a.get(wa, ()):
            for bv in self.leaf_b.get(wb, ()):
                i = len(av) - 1
                j = 0
                while i >= 0 and j < len(bv):
                    counters.probes += 1
                    s = av[i][0] + bv[j][0]
                    if s == z:
                        pairs.append((av[i][0], bv[j][0]))
                        if not want_all:
                            return pairs
                        i -= 1
                        j += 1
                    elif s > z:
                        if av[i][1] + bv[j][1] == g:
                            counters.false_witnesses += 1
                        i -= 1
                    else:
                        if av[i][1] + bv[j][1] == g:
                            counters.false_witnesses += 1
                        j += 1
        return pairs

    def search(self, g: int, z: int, counters: QueryCounters, want_all: bool = False):
        """Pairs (x, y) with x + y = z reachable through conv position g."""
        plan = self.plan
        found: list[tuple[int, int]] = []

        def visit(size: int, wa: int, wb: int) -> bool:
            local = g - size * (wa + wb)
            if local < 0 or local > 2 * size - 2:
                return False
            if size == plan.leaf:
                if size >= plan.E and not self.explicit_nonzero(size, wa, wb, local):
                    return False
                got = self._leaf_scan(wa, wb, g, z, counters, want_all)
                found.extend(got)
                return bool(got) and not want_all
            if size >= plan.E:
                nonzero = self.explicit_nonzero(size, wa, wb, local)
            else:
                nonzero = self.implicit_nonzero(size, wa, wb, local, counters)
            if not nonzero:
                return False
            half = size // 2
            for da in (0, 1):
                for db in (0, 1):
                    if visit(half, 2 * wa + da, 2 * wb + db):
                        return True
            return False

        visit(plan.n2, 0, 0)
        return found


def build_quadtree(vA, vB, X: int, eps: float, R: int | None = None) -> HybridQuadTree:
    """Standalone hybrid quad tree over two characteristic vectors."""
    if not isinstance(vA, CharVector):
        vA = CharVector(tuple(vA), {})
    if not isinstance(vB, CharVector):
        vB = CharVector(tuple(vB), {})
    if len(vA.bits) != len(vB.bits):
        raise ParameterError("characteristic vectors must have equal length")
    if R is None:
        R = max(1, math.isqrt(X) + (0 if math.isqrt(X) ** 2 == X else 1))
    plan = make_level_plan(len(vA.bits), X, eps)
    return HybridQuadTree(plan, vA.bits, vB.bits, vA.recovery, vB.recovery, X, R)


@dataclass(frozen=True)
class LevelReport:
    """Measured vs stated shape of one implicit level's instance."""

    index: int
    Z: int
    universe: int
    sets: int
    elements: int
    stated_sets: float        # n * sqrt(X / u_i)
    stated_sets_alt: float    # n * R / sqrt(Z)
    stated_elements: float    # n * sqrt(u_i)


class ThreeSumIndex:
    """Preprocessed arrays answering pair-sum queries through bucketed quad
    trees; trees materialize lazily per probed bucket pair."""

    def __init__(self, A, B, X: int, eps: float, seed: int = 0, si_mode: bool = False):
        A = list(A)
        B = list(B)
        n = len(A)
        if n < 1 or len(B) != n:
            raise ParameterError("arrays must be non-empty and equally sized")
        if len(set(A)) != n or len(set(B)) != n:
            raise ParameterError("array values must be distinct within each array")
        if min(A) < 0 or min(B) < 0:
            raise ParameterError("array values must be non-negative")
        if not 1 <= X <= n:
            raise ParameterError(f"X must lie in [1, n], got X={X}, n={n}")
        self.A, self.B, self.n, self.X, self.eps = A, B, n, X, eps
        self.si_mode = si_mode
        rng = random.Random(seed)
        r_target = max(1, math.isqrt(X) + (0 if math.isqrt(X) ** 2 == X else 1))
        self.h1 = ModPrimeHash(random_prime(rng, max(2, r_target), max(2, 2 * r_target)))
        self.h2 = ModPrimeHash(random_prime(rng, max(2, n), max(3, 2 * n - 1)))
        self.R = self.h1.modulus
        self.buckets = bucketize(A, B, self.R, self.h1)
        veclen = self.h2.modulus
        self.char_a = [char_vector(b, self.h2, veclen) for b in self.buckets.buckets_a]
        self.char_b = [char_vector(b, self.h2, veclen) for b in self.buckets.buckets_b]
        if si_mode:
            # Explicit all the way down; the leaf holds the intersection-
            # reporting shift sets at window length ~X.
            self.plan = make_level_plan(veclen, X, 0.0)
            self.si_instance = self._global_shift_level(self.plan.leaf)
        else:
            self.plan = make_level_plan(veclen, X, eps)
            self.si_instance = None
        self.shift_levels = {}
        for Z in self.plan.implicit_lengths:
            self.shift_levels[Z] = self._global_shift_level(Z)
        self._trees: dict[tuple[int, int], HybridQuadTree] = {}
        self.level_reports = self._make_reports()
        self.last_counters = QueryCounters()

    def _global_shift_level(self, Z: int):
        cap = math.ceil(Z / self.R)
        a_entries, b_entries = [], []
        amap: dict = {}
        bmap: dict = {}
        for bi, cv in enumerate(self.char_a):
            groups = _window_groups(_pad_bits(cv.bits, self._n2()), Z, cap)
            for w, grps in groups.items():
                amap[(bi, w)] = [(bi, w, gi) for gi in range(len(grps))]
                for gi, grp in enumerate(grps):
                    a_entries.append(((bi, w, gi), grp))
        for bi, cv in enumerate(self.char_b):
            groups = _window_groups(_pad_bits(cv.bits, self._n2()), Z, cap)
            for w, grps in groups.items():
                bmap[(bi, w)] = [(bi, w, gi) for gi in range(len(grps))]
                for gi, grp in enumerate(grps):
                    b_entries.append(((bi, w, gi), grp))
        return ShiftSetInstance(Z, a_entries, b_entries), amap, bmap

    def _n2(self) -> int:
        return self.plan.n2

    def _make_reports(self) -> list[LevelReport]:
        reports = []
        for idx, Z in enumerate(self.plan.implicit_lengths, start=1):
            inst, _, _ = self.shift_levels[Z]
            u_i = self.X ** (1 + self.eps) / 2 ** (idx - 1)
            reports.append(
                LevelReport(
                    index=idx,
                    Z=Z,
                    universe=inst.sys.u,
                    sets=inst.sys.m,
                    elements=inst.sys.N,
                    stated_sets=self.n * math.sqrt(self.X / u_i),
                    stated_sets_alt=self.n * self.R / math.sqrt(Z),
                    stated_elements=self.n * math.sqrt(u_i),
                )
            )
        return reports

    def tree(self, i: int, j: int) -> HybridQuadTree:
        key = (i, j)
        if key not in self._trees:
            levels = dict(self.shift_levels)
            if self.si_mode:
                levels = {}
            self._trees[key] = HybridQuadTree(
                self.plan,
                self.char_a[i].bits,
                self.char_b[j].bits,
                self.char_a[i].recovery,
                self.char_b[j].recovery,
                self.X,
                self.R,
                shift_levels=levels,
                a_key=i,
                b_key=j,
            )
        return self._trees[key]

    def materialize_all(self) -> None:
        for i in range(self.R):
            for j in range(self.R):
                self.tree(i, j)

    def _overflow_pairs(self, z: int, counters: QueryCounters, want_all: bool):
        pairs = []
        for x in self.buckets.overflow_a:
            counters.probes += 1
            if z - x in self.buckets.set_b:
                pairs.append((x, z - x))
                if not want_all:
                    return pairs
        for y in self.buckets.overflow_b:
            counters.probes += 1
            if z - y in self.buckets.set_a:
                pairs.append((z - y, y))
                if not want_all:
                    return pairs
        return pairs

    def query(self, z: int) -> tuple[int, int] | None:
        """One pair (x, y) with x in A, y in B, x + y = z, or None."""
        counters = QueryCounters()
        self.last_counters = counters
        got = self._overflow_pairs(z, counters, want_all=False)
        if got:
            x, y = got[0]
            assert x + y == z
            return got[0]
        hz = self.h1(z)
        targets = self.h2.sum_targets(self.h2(z))
        for i in range(self.R):
            if not self.buckets.buckets_a[i]:
                continue
            for j in self.h1.bucket_partners(hz, i):
                if not self.buckets.buckets_b[j]:
                    continue
                tree = self.tree(i, j)
                for g in targets:
                    got = tree.search(g, z, counters, want_all=False)
                    if got:
                        x, y = got[0]
                        assert x + y == z and x in self.buckets.set_a and y in self.buckets.set_b
                        return got[0]
        return None

    def query_report(self, z: int) -> list[tuple[int, int]]:
        """Every pair (x, y) with x + y = z (intersection-reporting mode)."""
        if not self.si_mode:
            raise ParameterError("structure was not built in reporting mode")
        counters = QueryCounters()
        self.last_counters = counters
        pairs = set(self._overflow_pairs(z, counters, want_all=True))
        hz = self.h1(z)
        targets = self.h2.sum_targets(self.h2(z))
        inst, amap, bmap = self.si_instance
        Z = self.plan.leaf
        for i in range(self.R):
            if not self.buckets.buckets_a[i]:
                continue
            for j in self.h1.bucket_partners(hz, i):
                if not self.buckets.buckets_b[j]:
                    continue
                tree = self.tree(i, j)
                for g in targets:
                    for wa, wb, local in self._si_leaves(tree, g):
                        for ka in amap.get((i, wa), ()):
                            for kb in bmap.get((j, wb), ()):
                                counters.si_queries += 1
                                for fp in inst.intersect_positions(ka, kb, local):
                                    pa, pb = inst.decode_position(local, fp)
                                    ga, gb = wa * Z + pa, wb * Z + pb
                                    for x in self.char_a[i].recovery.get(ga, ()):
                                        for y in self.char_b[j].recovery.get(gb, ()):
                                            counters.probes += 1
                                            if x + y == z:
                                                pairs.add((x, y))
                                            else:
                                                counters.false_witnesses += 1
        return sorted(pairs)

    def _si_leaves(self, tree: HybridQuadTree, g: int):
        """Leaf window pairs reached by descending nonzero explicit levels."""
        plan = tree.plan
        out = []

        def visit(size, wa, wb):
            local = g - size * (wa + wb)
            if local < 0 or local > 2 * size - 2:
                return
            if not tree.explicit_nonzero(size, wa, wb, local):
                return
            if size == plan.leaf:
                out.append((wa, wb, local))
                return
            half = size // 2
            for da in (0, 1):
                for db in (0, 1):
                    visit(half, 2 * wa + da, 2 * wb + db)

        visit(plan.n2, 0, 0)
        return out


def ts_build(A, B, X: int, eps: float, seed: int = 0, si_mode: bool = False) -> ThreeSumIndex:
    return ThreeSumIndex(A, B, X, eps, seed=seed, si_mode=si_mode)


def ts_query(st: ThreeSumIndex, z: int):
    return st.query(z)


def ts_query_reporting(st: ThreeSumIndex, z: int):
    return st.query_report(z)


def threesum_solve(A, B, C, X: int | None = None, eps: float = 0.25, seed: int = 0) -> bool:
    """Does some a in A, b in B, c in C satisfy a + b = c?  Solved by indexing
    A and B once and querying each element of C."""
    if not C:
        return False
    if not A or not B:
        return False
    n = len(A)
    if X is None:
        X = 1
        while X * 4 <= max(4, math.isqrt(n)):
            X *= 4
        X = min(X, n)
    st = ts_build(A, B, X, eps, seed=seed)
    return any(st.query(z) is not None for z in C)
