"""Residues mod n and the formal ring (Z/n)[i] with i^2 = -1."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import ModulusMismatch, NotInvertible


@dataclass(frozen=True)
class ModInt:
    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        # canonical representative in [0, n)
        object.__setattr__(self, "value", self.value % self.modulus)

    def _check(self, other: ModInt | int) -> int:
        if isinstance(other, ModInt):
            if other.modulus != self.modulus:
                raise ModulusMismatch(f"mod {self.modulus} vs mod {other.modulus}")
            return other.value
        return other

    def __add__(self, other):
        return ModInt(self.value + self._check(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return ModInt(self.value - self._check(other), self.modulus)

    def __rsub__(self, other):
        return ModInt(self._check(other) - self.value, self.modulus)

    def __mul__(self, other):
        return ModInt(self.value * self._check(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return ModInt(-self.value, self.modulus)

    def __pow__(self, k: int):
        if k < 0:
            return mod_inv(self) ** (-k)
        return ModInt(pow(self.value, k, self.modulus), self.modulus)

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.modulus})"


def mod_inv(a: ModInt) -> ModInt:
    """Multiplicative inverse of ``a``; raises NotInvertible with the gcd as witness."""
    g = gcd(a.value, a.modulus)
    if g != 1:
        raise NotInvertible(a.value, a.modulus, g)
    if a.modulus == 1:
        return ModInt(0, 1)
    return ModInt(pow(a.value, -1, a.modulus), a.modulus)


@dataclass(frozen=True)
class GaussMod:
    """re + im*i in (Z/n)[i], treated as a formal quotient ring even when -1 is a square mod n."""

    re: ModInt
    im: ModInt

    def __post_init__(self):
        if self.re.modulus != self.im.modulus:
            raise ModulusMismatch(f"mod {self.re.modulus} vs mod {self.im.modulus}")

    @classmethod
    def of(cls, re: int, im: int, n: int) -> GaussMod:
        return cls(ModInt(re, n), ModInt(im, n))

    @property
    def modulus(self) -> int:
        return self.re.modulus

    def conj(self) -> GaussMod:
        return GaussMod(self.re, -self.im)

    def __add__(self, other: GaussMod) -> GaussMod:
        return GaussMod(self.re + other.re, self.im + other.im)

    def __sub__(self, other: GaussMod) -> GaussMod:
        return GaussMod(self.re - other.re, self.im - other.im)

    def __neg__(self) -> GaussMod:
        return GaussMod(-self.re, -self.im)

    def __mul__(self, other: GaussMod) -> GaussMod:
        return gauss_mul(self, other)


def gauss_mul(a: GaussMod, b: GaussMod) -> GaussMod:
    if a.modulus != b.modulus:
        raise ModulusMismatch(f"mod {a.modulus} vs mod {b.modulus}")
    n = a.modulus
    ar, ai, br, bi = a.re.value, a.im.value, b.re.value, b.im.value
    return GaussMod.of(ar * br - ai * bi, ar * bi + ai * br, n)
