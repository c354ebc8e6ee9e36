"""Hash families used by the reductions.

Two kinds live here: a 2-universal affine family (collision probability
<= 1/range, used to compress medium sets into a bounded universe) and
additive families over the integers (exactly linear mod a prime by default,
plus a multiply-shift family that is only almost linear, to exercise the
candidate-position interface).
"""

from __future__ import annotations

import random

from .core import ParameterError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    c = max(2, n)
    while not is_prime(c):
        c += 1
    return c


def random_prime(rng: random.Random, lo: int, hi: int) -> int:
    """Seeded prime in [lo, hi]; falls back to the next prime above lo."""
    lo = max(2, lo)
    if hi < lo:
        hi = lo
    for _ in range(64):
        p = next_prime(rng.randint(lo, hi))
        if p <= hi:
            return p
    return next_prime(lo)


class TwoUniversalHash:
    """h(x) = ((a*x + b) mod p) mod range_size + 1, values in 1..range_size.

    p is a prime above both the domain and the range, a in 1..p-1,
    b in 0..p-1; distinct x, x' collide with probability <= 1/range_size
    up to the usual rounding slack, which is all the battery selection needs.
    """

    __slots__ = ("a", "b", "p", "range_size")

    def __init__(self, a: int, b: int, p: int, range_size: int):
        self.a = a
        self.b = b
        self.p = p
        self.range_size = range_size

    @classmethod
    def draw(cls, rng: random.Random, domain: int, range_size: int) -> "TwoUniversalHash":
        if range_size < 1:
            raise ParameterError("hash range must be >= 1")
        p = next_prime(max(domain, range_size, 2) + 1)
        return cls(rng.randint(1, p - 1), rng.randint(0, p - 1), p, range_size)

    def __call__(self, x: int) -> int:
        return (self.a * x + self.b) % self.p % self.range_size + 1


class ModPrimeHash:
    """Exactly linear family: h(x) = x mod p for a prime modulus p.

    h(x) + h(x') is congruent to h(x + x') mod p with no additive
    correction, so candidate_count is 1 and c_h is 0.  The integer sum
    h(x) + h(y) of a pair with x + y = z therefore lands on one of the
    positions returned by sum_targets(h(z)).
    """

    __slots__ = ("modulus",)

    candidate_count = 1
    c_h = 0

    def __init__(self, modulus: int):
        if modulus < 1:
            raise ParameterError("modulus must be >= 1")
        self.modulus = modulus

    @property
    def range_size(self) -> int:
        return self.modulus

    def __call__(self, x: int) -> int:
        return x % self.modulus

    def _base_candidates(self, hz: int) -> list[int]:
        return [(hz + self.c_h) % self.modulus]

    def sum_targets(self, hz: int) -> tuple[int, ...]:
        """Convolution indices in [0, 2*range-2] that can hold a true pair."""
        r = self.modulus
        out = set()
        for c in self._base_candidates(hz):
            out.add(c)
            if c + r <= 2 * r - 2:
                out.add(c + r)
        return tuple(sorted(out))

    def bucket_partners(self, hz: int, i: int) -> tuple[int, ...]:
        """Bucket indices that can pair with bucket i for a query hashing to hz."""
        return tuple(sorted({(c - i) % self.modulus for c in self._base_candidates(hz)}))

    @classmethod
    def draw(cls, rng: random.Random, target_range: int) -> "ModPrimeHash":
        return cls(random_prime(rng, max(2, target_range), max(2, 2 * target_range)))


class MultiplyShiftHash:
    """Almost-linear multiply-shift family: h(x) = (a*x mod 2^w) >> (w - s).

    h(x) + h(x') equals h(x + x') + c_h or c_h + 1 modulo 2^s with
    c_h = 2^s - 1, so candidate_count is 2.  Drop-in replacement for
    ModPrimeHash wherever the query layer probes all candidates.
    """

    __slots__ = ("a", "w", "s")

    candidate_count = 2

    def __init__(self, a: int, w: int, s: int):
        if not (0 < s <= w):
            raise ParameterError("need 0 < s <= w")
        if a % 2 == 0:
            raise ParameterError("multiplier must be odd")
        self.a = a
        self.w = w
        self.s = s

    @property
    def range_size(self) -> int:
        return 1 << self.s

    @property
    def c_h(self) -> int:
        return (1 << self.s) - 1

    def __call__(self, x: int) -> int:
        return (self.a * x % (1 << self.w)) >> (self.w - self.s)

    def _base_candidates(self, hz: int) -> list[int]:
        r = self.range_size
        return [(hz + self.c_h) % r, (hz + self.c_h + 1) % r]

    def sum_targets(self, hz: int) -> tuple[int, ...]:
        r = self.range_size
        out = set()
        for c in self._base_candidates(hz):
            out.add(c)
            if c + r <= 2 * r - 2:
                out.add(c + r)
        return tuple(sorted(out))

    def bucket_partners(self, hz: int, i: int) -> tuple[int, ...]:
        r = self.range_size
        return tuple(sorted({(c - i) % r for c in self._base_candidates(hz)}))

    @classmethod
    def draw(cls, rng: random.Random, domain: int, target_range: int) -> "MultiplyShiftHash":
        s = max(1, (max(2, target_range) - 1).bit_length())
        w = max(s, max(domain, 2).bit_length() + s + 1)
        return cls(rng.randrange(1, 1 << w, 2), w, s)
