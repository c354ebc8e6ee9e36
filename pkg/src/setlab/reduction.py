"""Reduction of general set-disjointness/intersection queries to inner
structures over a bounded universe.

Sets are partitioned by size into small / medium / large classes.  Small
sets answer queries by scanning, large sets get precomputed answers in a
matrix, and medium sets are compressed through a battery of hash functions
into universe [8u], where a caller-supplied builder constructs one inner
structure per function.  Battery selection resamples until, for every
disjoint medium pair, at least one function keeps the hashed images
(nearly) disjoint.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .core import (
    CostMeter,
    ParameterError,
    QueryResult,
    SetLabError,
    SetSystem,
    oracle_intersect,
)
from .hashing import TwoUniversalHash

SD = "sd"
SI = "si"


class BatteryError(SetLabError):
    """Battery selection exhausted its resampling rounds."""


def _floor_pow(base: float, exp: float) -> int:
    # Snap to the nearest integer first so exact powers survive float error.
    x = base**exp
    r = round(x)
    if abs(x - r) < 1e-9:
        return int(r)
    return math.floor(x)


@dataclass(frozen=True)
class SizeClassification:
    mode: str
    large_ids: tuple[int, ...]
    medium_ids: tuple[int, ...]
    small_ids: tuple[int, ...]
    large_min: int
    small_max: int
    p: dict  # large set id -> row index (1-based)
    q: dict  # medium set id -> column index (1-based)

    @property
    def d(self) -> int:
        return len(self.large_ids)

    @property
    def e(self) -> int:
        return len(self.medium_ids)


def classify(sys: SetSystem, u: int, eps: float, mode: str, alpha: float | None = None) -> SizeClassification:
    """Partition the sets into large / medium / small by size thresholds.

    Disjointness mode: large means size > floor(u^(1/2)), small means
    size <= floor(u^(1/2-eps)).  Intersection mode: large means
    size >= floor(u^(alpha-3eps/4)), small means size <= floor(u^(alpha-eps)),
    with the large test taking priority when floors collide.
    """
    if u < 2:
        raise ParameterError(f"u must be >= 2, got {u}")
    if not 0 < eps <= 0.5:
        raise ParameterError(f"eps must be in (0, 1/2], got {eps}")
    if mode == SD:
        large_min = _floor_pow(u, 0.5)
        small_max = _floor_pow(u, 0.5 - eps)
        is_large = lambda s: s > large_min
    elif mode == SI:
        if alpha is None or not 0.5 <= alpha <= 1.0:
            raise ParameterError(f"SI mode needs alpha in [1/2, 1], got {alpha}")
        large_min = _floor_pow(u, alpha - 0.75 * eps)
        small_max = _floor_pow(u, alpha - eps)
        is_large = lambda s: s >= large_min
    else:
        raise ParameterError(f"mode must be {SD!r} or {SI!r}, got {mode!r}")
    large, medium, small = [], [], []
    for i in range(1, sys.m + 1):
        s = sys.size_of(i)
        if is_large(s):
            large.append(i)
        elif s <= small_max:
            small.append(i)
        else:
            medium.append(i)
    return SizeClassification(
        mode=mode,
        large_ids=tuple(large),
        medium_ids=tuple(medium),
        small_ids=tuple(small),
        large_min=large_min,
        small_max=small_max,
        p={i: k for k, i in enumerate(large, start=1)},
        q={i: k for k, i in enumerate(medium, start=1)},
    )


def rename_elements(sys: SetSystem) -> dict[int, int]:
    """Map the distinct elements present to 1..N' by sorted order."""
    distinct = sorted({e for s in sys.sets for e in s})
    return {e: k for k, e in enumerate(distinct, start=1)}


@dataclass
class HashBattery:
    funcs: tuple[TwoUniversalHash, ...]
    rounds_used: int
    B: int

    @property
    def k(self) -> int:
        return len(self.funcs)


def battery_size(sys: SetSystem) -> int:
    n = max(sys.N, sys.m, 2)
    return max(1, math.ceil(math.log2(n)))


def si_false_positive_budget(u: int, eps: float, alpha: float) -> int:
    return _floor_pow(u, 2 * alpha - 1 - 1.5 * eps)


def select_hash_battery(
    sys: SetSystem,
    cls: SizeClassification,
    u: int,
    B: int,
    max_rounds: int,
    seed: int,
    rename: dict[int, int] | None = None,
) -> HashBattery:
    """Resample ceil(log2 n) functions into [8u] until every disjoint medium
    pair keeps a hashed-image intersection of at most B under some function.

    Verification is the explicit pairwise check; exhausting max_rounds is an
    explicit failure.
    """
    if max_rounds < 1:
        raise ParameterError(f"max_rounds must be >= 1, got {max_rounds}")
    if rename is None:
        rename = rename_elements(sys)
    k = battery_size(sys)
    rng = random.Random(seed)
    mediums = cls.medium_ids
    renamed = {i: [rename[e] for e in sys.set_of(i)] for i in mediums}
    disjoint_pairs = [
        (a, b)
        for ai, a in enumerate(mediums)
        for b in mediums[ai + 1 :]
        if oracle_intersect(sys, a, b).disjoint
    ]
    domain = max(sys.N, 1)
    for round_no in range(1, max_rounds + 1):
        funcs = tuple(TwoUniversalHash.draw(rng, domain, 8 * u) for _ in range(k))
        images = {
            i: [frozenset(h(x) for x in renamed[i]) for h in funcs] for i in mediums
        }
        ok = all(
            any(len(images[a][t] & images[b][t]) <= B for t in range(k))
            for a, b in disjoint_pairs
        )
        if ok:
            return HashBattery(funcs=funcs, rounds_used=round_no, B=B)
    raise BatteryError(
        f"no admissible battery after {max_rounds} rounds "
        f"(degenerate instance or bad family)"
    )


def verify_battery(sys: SetSystem, cls: SizeClassification, battery: HashBattery,
                   rename: dict[int, int]) -> bool:
    """Re-check the battery invariant by exhaustive pairwise enumeration."""
    mediums = cls.medium_ids
    renamed = {i: [rename[e] for e in sys.set_of(i)] for i in mediums}
    for ai, a in enumerate(mediums):
        for b in mediums[ai + 1 :]:
            if not oracle_intersect(sys, a, b).disjoint:
                continue
            if not any(
                len(frozenset(h(x) for x in renamed[a]) & frozenset(h(x) for x in renamed[b]))
                <= battery.B
                for h in battery.funcs
            ):
                return False
    return True


@dataclass(frozen=True)
class ReducedAnswer:
    """Disjointness bit, plus the element list in intersection mode."""

    disjoint: bool
    elements: tuple[int, ...] | None = None


class ReducedStructure:
    """Size classes + answer matrix + hashed inner structures.

    ``mode`` selects disjointness (inner structures only need emptiness,
    matrix stores bits) or intersection (matrix stores element lists, inner
    enumeration verifies candidates against the membership tables and aborts
    a hash function once its false-positive count exceeds the budget B).
    """

    def __init__(
        self,
        sys: SetSystem,
        u: int,
        eps: float,
        mode: str,
        inner_builder,
        alpha: float | None = None,
        max_rounds: int = 32,
        seed: int = 0,
    ):
        self.sys = sys
        self.u = u
        self.eps = eps
        self.mode = mode
        self.alpha = alpha
        cls = classify(sys, u, eps, mode, alpha)
        self.classification = cls
        self.B = 0 if mode == SD else si_false_positive_budget(u, eps, alpha)
        self.rename = rename_elements(sys)
        large_medium = cls.large_ids + cls.medium_ids
        self.M: dict[tuple[int, int], object] = {}
        for i in cls.large_ids:
            for j in large_medium:
                res = oracle_intersect(sys, i, j)
                self.M[(i, j)] = res.elements if mode == SI else res.disjoint
        self.battery: HashBattery | None = None
        self.inner = []
        self.preimages: list[dict[int, dict[int, tuple[int, ...]]]] = []
        if cls.e > 0:
            self.battery = select_hash_battery(
                sys, cls, u, self.B, max_rounds, seed, self.rename
            )
            for h in self.battery.funcs:
                hashed_sets = []
                pre_k: dict[int, dict[int, tuple[int, ...]]] = {}
                for i in cls.medium_ids:
                    pre: dict[int, list[int]] = {}
                    for e in sys.set_of(i):
                        pre.setdefault(h(self.rename[e]), []).append(e)
                    pre_k[i] = {v: tuple(es) for v, es in pre.items()}
                    hashed_sets.append(sorted(pre_k[i]))
                inner_sys = SetSystem(8 * u, hashed_sets)
                self.inner.append(inner_builder(inner_sys))
                self.preimages.append(pre_k)
        matrix_words = sum(
            len(v) if mode == SI else 1 for v in self.M.values()
        )
        self.meter = CostMeter(words=sys.N + matrix_words)

    def _class_of(self, i: int) -> str:
        cls = self.classification
        if i in cls.p:
            return "large"
        if i in cls.q:
            return "medium"
        return "small"

    def query(self, i: int, j: int) -> ReducedAnswer:
        """Disjointness (both modes) and the exact element list in SI mode."""
        self.meter.start_query()
        sys = self.sys
        sys.set_of(i), sys.set_of(j)
        a, b = (i, j) if sys.size_of(i) <= sys.size_of(j) else (j, i)
        want_elements = self.mode == SI
        if self._class_of(a) == "small":
            found = []
            table = sys.members(b)
            for e in sys.set_of(a):
                self.meter.probe()
                if e in table:
                    if not want_elements:
                        return ReducedAnswer(disjoint=False)
                    found.append(e)
            if want_elements:
                return ReducedAnswer(disjoint=not found, elements=tuple(found))
            return ReducedAnswer(disjoint=True)
        if self._class_of(b) == "large":
            self.meter.probe()
            cell = self.M[(b, a)] if (b, a) in self.M else self.M[(a, b)]
            if want_elements:
                return ReducedAnswer(disjoint=not cell, elements=tuple(cell))
            return ReducedAnswer(disjoint=bool(cell))
        # Both medium: consult the hashed inner structures.
        qi, qj = self.classification.q[a], self.classification.q[b]
        if self.mode == SD:
            for st in self.inner:
                self.meter.inner_query()
                if st.query(qi, qj).disjoint:
                    return ReducedAnswer(disjoint=True)
            return ReducedAnswer(disjoint=False)
        return self._query_si_medium(a, b, qi, qj)

    def _query_si_medium(self, a: int, b: int, qi: int, qj: int) -> ReducedAnswer:
        table_b = self.sys.members(b)
        partial: set[int] = set()
        for k, st in enumerate(self.inner):
            self.meter.inner_query()
            candidates = st.query(qi, qj).elements
            pre_a = self.preimages[k][a]
            false_positives = 0
            completed = True
            verified: list[int] = []
            for v in candidates:
                real = []
                for e in pre_a.get(v, ()):
                    self.meter.probe()
                    if e in table_b:
                        real.append(e)
                if real:
                    verified.extend(real)
                else:
                    false_positives += 1
                    if false_positives > self.B:
                        completed = False
                        break
            if completed:
                return ReducedAnswer(disjoint=not verified, elements=tuple(sorted(verified)))
            partial.update(verified)
        # Every function ran over budget; fall back to a direct scan so the
        # answer stays exact (cannot happen for batteries over disjoint pairs
        # unless the pair intersects and every function is collision-heavy).
        table = self.sys.members(b)
        found = []
        for e in self.sys.set_of(a):
            self.meter.probe()
            if e in table:
                found.append(e)
        found = sorted(set(found) | partial)
        return ReducedAnswer(disjoint=not found, elements=tuple(found))


def build_reduced(
    sys: SetSystem,
    u: int,
    eps: float,
    mode: str,
    inner_builder,
    alpha: float | None = None,
    max_rounds: int = 32,
    seed: int = 0,
) -> ReducedStructure:
    return ReducedStructure(
        sys, u, eps, mode, inner_builder, alpha=alpha, max_rounds=max_rounds, seed=seed
    )


def reduced_query(rs: ReducedStructure, i: int, j: int) -> ReducedAnswer:
    return rs.query(i, j)


class _OracleInner:
    def __init__(self, sys: SetSystem):
        self.sys = sys

    def query(self, i: int, j: int) -> QueryResult:
        return oracle_intersect(self.sys, i, j)


def oracle_inner_builder(sys: SetSystem) -> _OracleInner:
    """Brute-force inner structure for testing the reduction in isolation."""
    return _OracleInner(sys)


def alg1_inner_builder(sys: SetSystem):
    """Inner structures realized by the answer-matrix reporter."""
    from .structures import Alg1Structure

    r = max(1, math.isqrt(max(sys.N, 1)))
    return Alg1Structure(sys, r)
