"""Point counts R4(n) = #S(Z/n) and the sphere criteria for primes and twin primes."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import numpy as np

from .errors import BadFactorization, LimitExceeded
from .sieve import Factorization, factorize

ENUMERATION_LIMIT = 3000


@dataclass(frozen=True)
class CountReport:
    n: int
    r4: int
    method: Literal["enumeration", "formula"]
    is_prime_by_criterion: bool | None = None


def r2_counts(n: int) -> np.ndarray:
    """r2[c] = #{(a, b) in (Z/n)^2 : a^2 + b^2 = c}."""
    sq = (np.arange(n, dtype=np.int64) ** 2) % n
    hist = np.bincount(sq, minlength=n).astype(np.int64)
    # cyclic self-convolution of the square histogram: a linear convolution folded mod n
    full = np.convolve(hist, hist)
    r2 = full[:n].copy()
    r2[: n - 1] += full[n:]
    return r2


def r4_bruteforce(n: int, limit: int = ENUMERATION_LIMIT) -> int:
    """Count solutions of x1^2+x2^2+x3^2+x4^2 = 1 mod n by convolving two-square counts."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > limit:
        raise LimitExceeded(f"n = {n} exceeds the enumeration limit {limit}")
    if n == 1:
        return 1
    r2 = r2_counts(n)
    partner = (1 - np.arange(n)) % n
    return sum(int(a) * int(b) for a, b in zip(r2.tolist(), r2[partner].tolist()))


def r4_naive(n: int) -> int:
    """Four nested loops; only for cross-checking at tiny n."""
    sq = [x * x % n for x in range(n)]
    one = 1 % n
    return sum(1 for a in sq for b in sq for c in sq for d in sq if (a + b + c + d) % n == one)


def r4_formula(n: int, f: Factorization | None = None) -> int:
    """R4(n) = n^3 * prod over odd p | n of (1 - p^-2), in exact integer arithmetic."""
    if n < 1:
        raise ValueError("n must be positive")
    if f is None:
        f = factorize(n)
    elif f.n != n:
        raise BadFactorization(f"factorization of {f.n} given for n = {n}")
    num, den = n**3, 1
    for p in f.primes:
        if p != 2:
            num *= p * p - 1
            den *= p * p
    q, r = divmod(num, den)
    assert r == 0
    return q


def count(n: int, method: Literal["enumeration", "formula"] = "formula") -> CountReport:
    r4 = r4_bruteforce(n) if method == "enumeration" else r4_formula(n)
    crit = (r4 == n**3 - n) if n % 2 == 1 and n >= 3 else None
    return CountReport(n, r4, method, crit)


def _require_odd(n: int) -> None:
    if n < 3 or n % 2 == 0:
        raise ValueError(f"the sphere criteria are stated for odd n >= 3, got {n}")


def prime_test_sphere(n: int, mode: Literal["enumerate", "factor"] = "enumerate") -> bool:
    """n is an odd prime iff #S(Z/n) = n^3 - n.

    In "factor" mode R4 comes from the factorization of n, so the test is circular:
    it demonstrates the criterion rather than deciding primality cheaply.
    """
    _require_odd(n)
    r4 = r4_bruteforce(n) if mode == "enumerate" else r4_formula(n)
    return r4 == n**3 - n


def euler_factor(x: int) -> Fraction:
    """E(x) = (1 - 1/x^2)^-1 as an exact rational."""
    return Fraction(x * x, x * x - 1)


def odd_euler_product(n: int, f: Factorization | None = None) -> Fraction:
    """Product of E(p) over the odd primes p dividing n."""
    f = f if f is not None else factorize(n)
    out = Fraction(1)
    for p in f.primes:
        if p != 2:
            out *= euler_factor(p)
    return out


def twin_sides(n: int) -> tuple[Fraction, Fraction]:
    """Both sides of the twin-prime identity for n, n + 2."""
    _require_odd(n)
    f = factorize(n * (n + 2))
    lhs = odd_euler_product(n * (n + 2), f)
    rhs = Fraction(n * n * (n + 2) ** 2, (n - 1) * (n + 1) ** 2 * (n + 3))
    return lhs, rhs


def twin_test_sphere(n: int) -> bool:
    """n, n + 2 are twin primes iff prod E(p) over odd p | n(n+2) equals n^2(n+2)^2 / ((n-1)(n+1)^2(n+3))."""
    lhs, rhs = twin_sides(n)
    return lhs == rhs
