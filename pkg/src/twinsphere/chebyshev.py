"""Chebyshev polynomials mod n and fast scalar multiplication on the sphere group.

kX = (T_k(x1), x2 U_{k-1}(x1), x3 U_{k-1}(x1), x4 U_{k-1}(x1)).
"""
from __future__ import annotations

from dataclasses import dataclass

from .modring import ModInt
from .sphere_group import SpherePoint


@dataclass(frozen=True)
class ChebPair:
    t: ModInt  # T_k(x)
    u: ModInt  # U_{k-1}(x)
    k: int


def _double(x: int, T: int, Tm: int, U: int, Um: int, n: int, odd: bool):
    """From (T_j, T_{j-1}, U_j, U_{j-1}) return the same quadruple at 2j (or 2j+1 when odd)."""
    a = x * U - Um           # x U_j - U_{j-1}
    T2 = (2 * T * T - 1) % n
    U2 = (2 * Um * a + 1) % n
    if odd:
        T2p1 = (2 * (2 * x * T - Tm) * T - x) % n
        U2p1 = (2 * U * a) % n
        return T2p1, T2, U2p1, U2
    T2m1 = (2 * T * Tm - x) % n
    U2m1 = (2 * a * (2 * x * Um - U) + 2 * x) % n
    return T2, T2m1, U2, U2m1


def cheb_eval(x: ModInt, k: int) -> ChebPair:
    """(T_k(x), U_{k-1}(x)) mod n in O(log k) steps, with U_{-1} = 0."""
    if k < 0:
        raise ValueError("k must be non-negative")
    n = x.modulus
    xv = x.value
    if k == 0:
        return ChebPair(ModInt(1, n), ModInt(0, n), 0)
    # state at j = 1: T_1, T_0, U_1, U_0
    T, Tm, U, Um = xv % n, 1 % n, 2 * xv % n, 1 % n
    for bit in bin(k)[3:]:
        T, Tm, U, Um = _double(xv, T, Tm, U, Um, n, bit == "1")
    return ChebPair(ModInt(T, n), ModInt(Um, n), k)


def cheb_linear(x: ModInt, k: int) -> ChebPair:
    """Same values as cheb_eval via the three-term recurrences; O(k)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    n, xv = x.modulus, x.value
    T_prev, T = 1 % n, xv % n          # T_0, T_1
    U_prev, U = 0, 1 % n               # U_{-1}, U_0
    if k == 0:
        return ChebPair(ModInt(1, n), ModInt(0, n), 0)
    for _ in range(k - 1):
        T_prev, T = T, (2 * xv * T - T_prev) % n
        U_prev, U = U, (2 * xv * U - U_prev) % n
    return ChebPair(ModInt(T, n), ModInt(U, n), k)


def scalar_mul(X: SpherePoint, k: int) -> SpherePoint:
    """k-fold sum X (+) ... (+) X; k = 0 gives the identity."""
    if k < 0:
        raise ValueError("k must be non-negative; compose with neg for negative multiples")
    x1, x2, x3, x4 = X.coords
    n = X.modulus
    c = cheb_eval(ModInt(x1, n), k)
    u = c.u.value
    return SpherePoint((c.t.value, x2 * u, x3 * u, x4 * u), n)
