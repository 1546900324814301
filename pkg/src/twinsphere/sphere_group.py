"""Points of x1^2 + x2^2 + x3^2 + x4^2 = 1 over Z/n and their quaternionic group law."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .errors import DomainError, ModulusMismatch, NotInvertible, NotOnSphere
from .modring import GaussMod, ModInt, mod_inv


@dataclass(frozen=True)
class SpherePoint:
    coords: tuple[int, int, int, int]
    modulus: int

    def __post_init__(self):
        n = self.modulus
        if n < 1:
            raise ValueError(f"modulus must be >= 1, got {n}")
        if len(self.coords) != 4:
            raise ValueError("a sphere point has exactly four coordinates")
        c = tuple(int(x) % n for x in self.coords)
        if sum(x * x for x in c) % n != 1 % n:
            raise NotOnSphere(f"{c} is not on the 3-sphere mod {n}")
        object.__setattr__(self, "coords", c)

    @classmethod
    def identity(cls, n: int) -> SpherePoint:
        return cls((1, 0, 0, 0), n)

    @property
    def x1(self) -> ModInt:
        return ModInt(self.coords[0], self.modulus)

    @property
    def x2(self) -> ModInt:
        return ModInt(self.coords[1], self.modulus)

    @property
    def x3(self) -> ModInt:
        return ModInt(self.coords[2], self.modulus)

    @property
    def x4(self) -> ModInt:
        return ModInt(self.coords[3], self.modulus)

    def is_identity(self) -> bool:
        return self.coords == (1 % self.modulus, 0, 0, 0)

    def __add__(self, other: SpherePoint) -> SpherePoint:
        return add(self, other)

    def __neg__(self) -> SpherePoint:
        return neg(self)

    def __sub__(self, other: SpherePoint) -> SpherePoint:
        return add(self, neg(other))

    def __str__(self):
        return ",".join(str(x) for x in self.coords)


def add(X: SpherePoint, Y: SpherePoint) -> SpherePoint:
    """X (+) Y = (x1 y1 - X~.Y~ | X~ y1 + x1 Y~ - X~ x Y~), X~ being the last three coordinates."""
    if X.modulus != Y.modulus:
        raise ModulusMismatch(f"mod {X.modulus} vs mod {Y.modulus}")
    x1, a2, a3, a4 = X.coords
    y1, b2, b3, b4 = Y.coords
    z1 = x1 * y1 - (a2 * b2 + a3 * b3 + a4 * b4)
    z2 = a2 * y1 + x1 * b2 - (a3 * b4 - a4 * b3)
    z3 = a3 * y1 + x1 * b3 - (a4 * b2 - a2 * b4)
    z4 = a4 * y1 + x1 * b4 - (a2 * b3 - a3 * b2)
    return SpherePoint((z1, z2, z3, z4), X.modulus)


def neg(X: SpherePoint) -> SpherePoint:
    x1, x2, x3, x4 = X.coords
    return SpherePoint((x1, -x2, -x3, -x4), X.modulus)


# --- matrix images -------------------------------------------------------


@dataclass(frozen=True)
class SO4Matrix:
    rows: tuple[tuple[int, ...], ...]
    modulus: int

    def __matmul__(self, other: SO4Matrix) -> SO4Matrix:
        if self.modulus != other.modulus:
            raise ModulusMismatch(f"mod {self.modulus} vs mod {other.modulus}")
        n = self.modulus
        cols = list(zip(*other.rows))
        return SO4Matrix(
            tuple(tuple(sum(a * b for a, b in zip(r, c)) % n for c in cols) for r in self.rows),
            n,
        )

    @property
    def T(self) -> SO4Matrix:
        return SO4Matrix(tuple(zip(*self.rows)), self.modulus)

    def entry(self, i: int, j: int) -> ModInt:
        return ModInt(self.rows[i][j], self.modulus)

    def is_identity(self) -> bool:
        n = self.modulus
        return all(self.rows[i][j] == (1 % n if i == j else 0) for i in range(4) for j in range(4))

    def det(self) -> int:
        return _det(self.rows) % self.modulus


def _det(rows: Sequence[Sequence[int]]) -> int:
    # Leibniz expansion; only ever used on 4x4 matrices
    k = len(rows)
    total = 0
    for perm in permutations(range(k)):
        inversions = sum(1 for i in range(k) for j in range(i + 1, k) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


@dataclass(frozen=True)
class SU2Matrix:
    """[[alpha, -conj(beta)], [beta, conj(alpha)]] over (Z/n)[i]."""

    entries: tuple[tuple[GaussMod, GaussMod], tuple[GaussMod, GaussMod]]

    @property
    def modulus(self) -> int:
        return self.entries[0][0].modulus

    def __matmul__(self, other: SU2Matrix) -> SU2Matrix:
        (a, b), (c, d) = self.entries
        (e, f), (g, h) = other.entries
        return SU2Matrix(((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)))

    def det(self) -> GaussMod:
        (a, b), (c, d) = self.entries
        return a * d - b * c


def phi(X: SpherePoint) -> SO4Matrix:
    x1, x2, x3, x4 = X.coords
    n = X.modulus
    rows = (
        (x1, x2, x3, x4),
        (-x2, x1, x4, -x3),
        (-x3, -x4, x1, x2),
        (-x4, x3, -x2, x1),
    )
    return SO4Matrix(tuple(tuple(v % n for v in r) for r in rows), n)


def theta(X: SpherePoint) -> SU2Matrix:
    x1, x2, x3, x4 = X.coords
    n = X.modulus
    alpha = GaussMod.of(x1, x2, n)
    beta = GaussMod.of(x3, x4, n)
    return SU2Matrix(((alpha, -beta.conj()), (beta, alpha.conj())))


def theta_inv(M: SU2Matrix) -> SpherePoint:
    alpha, beta = M.entries[0][0], M.entries[1][0]
    return SpherePoint((alpha.re.value, alpha.im.value, beta.re.value, beta.im.value), M.modulus)


# --- orders and sampling -------------------------------------------------


def element_order(X: SpherePoint) -> int:
    """Least k >= 1 with kX = O."""
    from .chebyshev import scalar_mul
    from .counting import r4_formula
    from .sieve import factorize, is_prime

    n = X.modulus
    if X.is_identity():
        return 1
    if n > 2 and is_prime(n):
        # Lagrange: the order divides #S(Z/p) = p^3 - p
        group_order = r4_formula(n)
        for d in _divisors(group_order, factorize(group_order)):
            if scalar_mul(X, d).is_identity():
                return d
        raise AssertionError("order must divide the group order")
    k, acc = 1, X
    while not acc.is_identity():
        acc = add(acc, X)
        k += 1
    return k


def _divisors(n: int, fact) -> list[int]:
    divs = [1]
    for p, e in fact.pairs:
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def random_point(n: int, rng: random.Random | None = None) -> SpherePoint:
    """Random point mod n, drawn through the rational parametrization reduced mod n."""
    rng = rng or random.Random()
    if n <= 2:
        pts = [(a, b, c, d) for a in range(n) for b in range(n) for c in range(n) for d in range(n)
               if (a * a + b * b + c * c + d * d) % n == 1 % n]
        return SpherePoint(rng.choice(pts), n)
    while True:
        t, u, v = rng.randrange(n), rng.randrange(n), rng.randrange(n)
        try:
            winv = mod_inv(ModInt(1 + t * t + u * u + v * v, n)).value
        except NotInvertible:
            continue
        x = ((1 + t * t + u * u + v * v - 2 * t * t) * winv, 2 * t * u * winv, 2 * t * winv, 2 * t * v * winv)
        # conjugating by a random sign pattern reaches points with x3 = 0 as well
        if rng.random() < 0.5:
            x = (x[0], x[2], x[1], x[3])
        return SpherePoint(x, n)


# --- rational parametrization -------------------------------------------


@dataclass(frozen=True)
class RationalPoint3:
    t: Fraction
    u: Fraction
    v: Fraction

    def __post_init__(self):
        for name in ("t", "u", "v"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))


def rational_param(p: RationalPoint3) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(t, u, v) -> ((w - 2t^2)/w, 2tu/w, 2t/w, 2tv/w) with w = 1 + t^2 + u^2 + v^2."""
    t, u, v = p.t, p.u, p.v
    if t == 0:
        raise DomainError("t must be nonzero")
    w = 1 + t * t + u * u + v * v
    return ((w - 2 * t * t) / w, 2 * t * u / w, 2 * t / w, 2 * t * v / w)


def rational_param_inv(q: Sequence[Fraction]) -> RationalPoint3:
    x1, x2, x3, x4 = (Fraction(x) for x in q)
    if x3 == 0:
        raise DomainError("x3 = 0: point lies on the excluded 2-sphere")
    if x1 * x1 + x2 * x2 + x3 * x3 + x4 * x4 != 1:
        raise NotOnSphere(f"{tuple(q)} is not on the rational 3-sphere")
    return RationalPoint3((1 - x1) / x3, x2 / x3, x4 / x3)
