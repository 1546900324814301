"""Segmented odd-only smallest-prime-factor sieve, factorization and twin prime counts."""
from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import BadFactorization, OutOfRange

DEFAULT_SPAN = 1 << 22  # odd entries per segment
# first 13 prime bases make Miller-Rabin deterministic below this bound
FALLBACK_LIMIT = 3_317_044_064_679_887_385_961_981


# --- small primes -------------------------------------------------------


def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit (plain sieve of Eratosthenes)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def base_primes_for(limit: int) -> np.ndarray:
    """Odd primes up to sqrt(limit), shared read-only by every segment."""
    ps = small_primes(math.isqrt(max(limit, 0)) + 1)
    return ps[ps > 2]


def _first_odd_index(p: int, lo: int, start_at: int) -> int:
    """Index (m - lo) // 2 of the least odd multiple m of p with m >= max(lo, start_at)."""
    start = max(start_at, lo)
    m = -(-start // p) * p
    if m % 2 == 0:
        m += p
    return (m - lo) // 2


# --- segments -----------------------------------------------------------


@dataclass
class SpfSegment:
    """Smallest prime factors of the odd integers base, base+2, ..., base+2(len-1)."""

    base: int
    spf: np.ndarray

    @property
    def stop(self) -> int:
        return self.base + 2 * len(self.spf)

    def covers(self, m: int) -> bool:
        return m % 2 == 1 and self.base <= m < self.stop

    def __getitem__(self, m: int) -> int:
        return int(self.spf[(m - self.base) // 2])


def build_spf_segment(base: int, count: int, base_primes: np.ndarray) -> SpfSegment:
    if base % 2 == 0:
        raise ValueError("segments start at an odd integer")
    hi = base + 2 * count
    values = base + 2 * np.arange(count, dtype=np.int64)
    spf = np.zeros(count, dtype=np.uint32 if hi <= 1 << 32 else np.uint64)
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        i = _first_odd_index(p, base, p * p)
        if i >= count:
            continue
        view = spf[i::p]
        view[view == 0] = p
    unset = spf == 0
    spf[unset] = values[unset]  # primes, and 1 maps to itself
    return SpfSegment(base, spf)


@dataclass(frozen=True)
class Factorization:
    pairs: tuple[tuple[int, int], ...]
    n: int = field(default=0)

    def __post_init__(self):
        pairs = tuple((int(p), int(e)) for p, e in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        prod = 1
        last = 1
        for p, e in pairs:
            if p <= last or e < 1:
                raise BadFactorization(f"non-canonical factorization {pairs}")
            last = p
            prod *= p**e
        if self.n == 0:
            object.__setattr__(self, "n", prod)
        elif prod != self.n:
            raise BadFactorization(f"{pairs} multiplies to {prod}, not {self.n}")

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.pairs]

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


class SpfTable:
    """SPF coverage of [1, limit) built from consecutive segments."""

    def __init__(self, limit: int, span: int = DEFAULT_SPAN):
        self.limit = limit
        self.base_primes = base_primes_for(limit)
        self.segments: list[SpfSegment] = []
        lo = 1
        while lo < limit:
            count = min(span, (limit - lo + 1) // 2)
            self.segments.append(build_spf_segment(lo, count, self.base_primes))
            lo += 2 * count
        self._starts = [s.base for s in self.segments]

    def covers(self, m: int) -> bool:
        return 1 <= m < self.limit

    def spf(self, m: int) -> int:
        if m % 2 == 0:
            return 2
        seg = self.segments[bisect.bisect_right(self._starts, m) - 1]
        return seg[m]

    def is_prime(self, m: int) -> bool:
        return m >= 2 and self.spf(m) == m


# --- single-query fallback ---------------------------------------------

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def miller_rabin(m: int) -> bool:
    """Miller-Rabin with the first 13 prime bases (deterministic below 3.3e24)."""
    if m < 2:
        return False
    for p in _MR_BASES:
        if m % p == 0:
            return m == p
    d, r = m - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(r - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def pollard_rho(m: int, seed: int = 0) -> int:
    """A nontrivial factor of composite m (Brent's variant)."""
    if m % 2 == 0:
        return 2
    rng = random.Random(seed)
    while True:
        y, c, batch = rng.randrange(1, m), rng.randrange(1, m), 128
        g, r, q = 1, 1, 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % m
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(batch, r - k)):
                    y = (y * y + c) % m
                    q = q * abs(x - y) % m
                g = math.gcd(q, m)
                k += batch
            r *= 2
        if g == m:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % m
                g = math.gcd(abs(x - ys), m)
        if g != m:
            return g


def _factor_fallback(m: int, out: dict[int, int]) -> None:
    for p in (2, 3, 5, 7, 11, 13):
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
    stack = [m] if m > 1 else []
    while stack:
        k = stack.pop()
        if miller_rabin(k):
            out[k] = out.get(k, 0) + 1
            continue
        d = pollard_rho(k)
        stack += [d, k // d]


# --- public queries -----------------------------------------------------


def factorize(m: int, table: SpfTable | None = None, fallback_limit: int = FALLBACK_LIMIT) -> Factorization:
    """Canonical factorization of m via the SPF table, or Miller-Rabin/Pollard rho beyond it."""
    if m < 1:
        raise ValueError("m must be positive")
    exps: dict[int, int] = {}
    if table is not None and table.covers(m):
        k = m
        while k % 2 == 0:
            exps[2] = exps.get(2, 0) + 1
            k //= 2
        while k > 1:
            p = table.spf(k)
            exps[p] = exps.get(p, 0) + 1
            k //= p
    elif m <= fallback_limit:
        _factor_fallback(m, exps)
    else:
        raise OutOfRange(f"{m} exceeds sieve coverage and the fallback limit {fallback_limit}")
    return Factorization(tuple(sorted(exps.items())), m)


def is_prime(m: int, table: SpfTable | None = None) -> bool:
    """Exact below FALLBACK_LIMIT; strong probable-prime test above it."""
    if table is not None and table.covers(m):
        return table.is_prime(m)
    return miller_rabin(m)


def odd_prime_mask(lo: int, count: int, base_primes: np.ndarray) -> np.ndarray:
    """Primality flags of the odd integers lo, lo+2, ..., lo+2(count-1).

    base_primes must include every odd prime up to sqrt of the largest entry.
    """
    hi = lo + 2 * count
    mask = np.ones(count, dtype=bool)
    if lo <= 1:
        mask[0] = False  # 1 is not prime
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        i = _first_odd_index(p, lo, p * p)
        mask[i::p] = False
    return mask


def iter_odd_prime_blocks(limit: int, span: int = DEFAULT_SPAN) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (lo, mask) blocks of odd primality flags covering the odd integers in [1, limit]."""
    bp = base_primes_for(limit)
    lo = 1
    while lo <= limit:
        count = min(span, (limit - lo) // 2 + 1)
        yield lo, odd_prime_mask(lo, count, bp)
        lo += 2 * count


def twin_count(x: int, span: int = DEFAULT_SPAN) -> int:
    """pi_2(x): number of twin pairs (p, p + 2) with p + 2 <= x."""
    total = 0
    carry = False  # whether the last odd of the previous block was prime
    for lo, mask in iter_odd_prime_blocks(x, span):
        total += int(np.count_nonzero(mask[1:] & mask[:-1]))
        if carry and mask[0]:
            total += 1
        carry = bool(mask[-1])
    return total


def twin_count_brute(x: int) -> int:
    """Trial-division oracle for twin_count (small x only)."""
    def prime(k):
        return k >= 2 and all(k % d for d in range(2, math.isqrt(k) + 1))
    return sum(1 for q in range(5, x + 1) if prime(q) and prime(q - 2))


# --- segment factoring for the series engine ---------------------------


def prime_divisor_sums(
    lo: int,
    count: int,
    base_primes: np.ndarray,
    weight: Callable[[np.ndarray], np.ndarray],
) -> tuple[np.ndarray, np.ndarray]:
    """For the odd integers m = lo + 2i, return (is_prime, sum of weight(p) over distinct primes p | m).

    Weights are added in ascending prime order, the cofactor prime above sqrt(m) last.
    base_primes must include every odd prime up to sqrt of the largest entry.
    """
    hi = lo + 2 * count
    values = lo + 2 * np.arange(count, dtype=np.int64)
    rem = values.copy()
    acc = np.zeros(count, dtype=np.float64)
    used = base_primes[base_primes * base_primes < hi]
    wts = weight(used.astype(np.float64)) if len(used) else np.zeros(0)
    for p, w in zip(used.tolist(), wts.tolist()):
        i = _first_odd_index(p, lo, p)
        if i >= count:
            continue
        acc[i::p] += w
        q = p
        while q < hi:
            j = _first_odd_index(q, lo, q)
            if j >= count:
                break
            rem[j::q] //= p
            q *= p
    big = rem > 1
    acc[big] += weight(rem[big].astype(np.float64))
    is_p = (rem == values) & (values > 1)
    # base primes inside the block divided themselves away
    small = (used >= lo) & (used < hi)
    is_p[(used[small] - lo) // 2] = True
    return is_p, acc


def factorize_trial(m: int) -> Factorization:
    """Trial-division oracle."""
    exps: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            exps[d] = exps.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        exps[m] = exps.get(m, 0) + 1
    return Factorization(tuple(sorted(exps.items())))
