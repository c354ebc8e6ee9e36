"""Instance model, generators, brute-force oracles, and cost accounting.

Everything downstream (structures, reductions, encoders) consumes the
SetSystem type defined here and is checked against the oracles defined here.
Set indices are 1-based in every public API; elements live in 1..u.
"""

from __future__ import annotations

import random
from dataclasses import dataclass


class SetLabError(Exception):
    """Base class for library errors."""


class ParameterError(SetLabError, ValueError):
    """A caller-supplied parameter is outside its documented domain."""


class InstanceFormatError(SetLabError, ValueError):
    """An instance or query file violates the on-disk format."""


@dataclass(frozen=True)
class QueryResult:
    """Answer to an intersection query: the sorted common elements."""

    elements: tuple[int, ...]

    @property
    def disjoint(self) -> bool:
        return not self.elements

    @property
    def out(self) -> int:
        return len(self.elements)


class CostMeter:
    """Machine-word and probe accounting attached to a built structure.

    ``words`` counts retained payload words (matrix cells, list entries,
    table slots), not allocator overhead.  ``probes`` counts element
    comparisons / hash lookups of the last query and resets at query start.
    ``queries_issued`` counts inner-structure queries made by reductions.
    """

    __slots__ = ("words", "probes", "queries_issued")

    def __init__(self, words: int = 0):
        self.words = words
        self.probes = 0
        self.queries_issued = 0

    def start_query(self) -> None:
        self.probes = 0
        self.queries_issued = 0

    def probe(self, n: int = 1) -> None:
        self.probes += n

    def inner_query(self, n: int = 1) -> None:
        self.queries_issued += n


class SetSystem:
    """A collection of m sets over universe 1..u, each strictly sorted.

    Immutable after construction and safe to share across threads.
    """

    __slots__ = ("m", "u", "sets", "N", "_members")

    def __init__(self, u: int, sets):
        if u < 0:
            raise ParameterError(f"universe size must be >= 0, got {u}")
        norm = []
        for idx, s in enumerate(sets, start=1):
            t = tuple(s)
            for a, b in zip(t, t[1:]):
                if a >= b:
                    raise InstanceFormatError(
                        f"set {idx} is not strictly increasing near {a}"
                    )
            if t and (t[0] < 1 or t[-1] > u):
                raise InstanceFormatError(
                    f"set {idx} has element outside 1..{u}"
                )
            norm.append(t)
        self.u = u
        self.sets = tuple(norm)
        self.m = len(self.sets)
        self.N = sum(len(s) for s in self.sets)
        self._members = [None] * self.m

    def set_of(self, i: int) -> tuple[int, ...]:
        """Elements of the i-th set (1-based index)."""
        if not 1 <= i <= self.m:
            raise ParameterError(f"set index {i} out of range 1..{self.m}")
        return self.sets[i - 1]

    def size_of(self, i: int) -> int:
        return len(self.set_of(i))

    def members(self, i: int) -> frozenset:
        """Membership table of the i-th set (built lazily, then cached)."""
        self.set_of(i)
        if self._members[i - 1] is None:
            self._members[i - 1] = frozenset(self.sets[i - 1])
        return self._members[i - 1]

    def occurrences(self) -> dict[int, list[int]]:
        """Inverted index: element -> sorted list of set ids containing it."""
        occ: dict[int, list[int]] = {}
        for i, s in enumerate(self.sets, start=1):
            for e in s:
                occ.setdefault(e, []).append(i)
        return occ

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SetSystem)
            and self.u == other.u
            and self.sets == other.sets
        )

    def __hash__(self):
        return hash((self.u, self.sets))

    def __repr__(self):
        return f"SetSystem(m={self.m}, u={self.u}, N={self.N})"


def gen_random_instance(m: int, u: int, target_n: int, seed: int) -> SetSystem:
    """Random system: i.i.d. uniform element draws, deduplicated, topped up
    until the total element count equals ``target_n``.

    Deterministic for a fixed seed.
    """
    if m < 1:
        raise ParameterError(f"m must be >= 1, got {m}")
    if u < 1:
        raise ParameterError(f"u must be >= 1, got {u}")
    if target_n < 0:
        raise ParameterError(f"target_n must be >= 0, got {target_n}")
    if target_n > m * u:
        raise ParameterError(
            f"target_n={target_n} exceeds m*u={m * u}: impossible by pigeonhole"
        )
    rng = random.Random(seed)
    sets = [set() for _ in range(m)]
    total = 0
    rounds = 0
    while total < target_n and rounds < 64:
        for _ in range(target_n - total):
            i = rng.randrange(m)
            e = rng.randint(1, u)
            if e not in sets[i]:
                sets[i].add(e)
                total += 1
        rounds += 1
    if total < target_n:
        # Near-full systems: fill deterministically from the free cells.
        free = [(i, e) for i in range(m) for e in range(1, u + 1) if e not in sets[i]]
        for i, e in rng.sample(free, target_n - total):
            sets[i].add(e)
    return SetSystem(u, [sorted(s) for s in sets])


def gen_nested_instance(m: int, u: int, seed: int) -> SetSystem:
    """Nested family with harmonic sizes: set i holds the first floor(u/i)
    entries of a seeded permutation of 1..u.

    Pairwise intersections have size min(|S_i|, |S_j|) and element
    frequencies follow u/rank, which makes the answer-matrix mass of the
    intersection structures actually scale like N^2/r across a threshold
    sweep (uniform families collapse to a step there).
    """
    if m < 1 or u < 1:
        raise ParameterError("m and u must be >= 1")
    rng = random.Random(seed)
    perm = list(range(1, u + 1))
    rng.shuffle(perm)
    sets = [sorted(perm[: max(1, u // i)]) for i in range(1, m + 1)]
    return SetSystem(u, sets)


def oracle_intersect(sys: SetSystem, i: int, j: int) -> QueryResult:
    """Ground truth: linear merge of the two sorted sets."""
    a, b = sys.set_of(i), sys.set_of(j)
    out = []
    x, y = 0, 0
    while x < len(a) and y < len(b):
        if a[x] == b[y]:
            out.append(a[x])
            x += 1
            y += 1
        elif a[x] < b[y]:
            x += 1
        else:
            y += 1
    return QueryResult(tuple(out))


def oracle_intersect_hashset(sys: SetSystem, i: int, j: int) -> QueryResult:
    """Independent second oracle: membership tests against a hash set."""
    a, b = sys.set_of(i), sys.set_of(j)
    if len(a) > len(b):
        a, b = b, a
    bs = frozenset(b)
    return QueryResult(tuple(e for e in a if e in bs))


def save_instance(sys: SetSystem, path) -> None:
    """Write the line-oriented instance format: `m u`, then one set per line."""
    lines = [f"{sys.m} {sys.u}"]
    for s in sys.sets:
        lines.append(" ".join(str(e) for e in s))
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


def load_instance(path) -> SetSystem:
    with open(path) as f:
        raw = f.read().split("\n")
    if not raw or not raw[0].strip():
        raise InstanceFormatError("missing header line `m u`")
    head = raw[0].split()
    if len(head) != 2:
        raise InstanceFormatError(f"malformed header {raw[0]!r}, expected `m u`")
    try:
        m, u = int(head[0]), int(head[1])
    except ValueError as exc:
        raise InstanceFormatError(f"non-integer header {raw[0]!r}") from exc
    if m < 0:
        raise InstanceFormatError(f"negative set count {m}")
    body = raw[1 : 1 + m]
    if len(body) < m:
        raise InstanceFormatError(f"expected {m} set lines, found {len(body)}")
    sets = []
    for line in body:
        try:
            sets.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise InstanceFormatError(f"non-integer element in line {line!r}") from exc
    return SetSystem(u, sets)


def load_pairs(path) -> list[tuple[int, int]]:
    """Query file: one `i j` pair per line."""
    pairs = []
    with open(path) as f:
        for line in f:
            if not line.strip():
                continue
            toks = line.split()
            if len(toks) != 2:
                raise InstanceFormatError(f"malformed query line {line!r}")
            try:
                pairs.append((int(toks[0]), int(toks[1])))
            except ValueError as exc:
                raise InstanceFormatError(f"non-integer query line {line!r}") from exc
    return pairs


def all_pairs(sys: SetSystem):
    """Every ordered query pair (i, j), the exhaustive sweep order."""
    for i in range(1, sys.m + 1):
        for j in range(1, sys.m + 1):
            yield i, j
