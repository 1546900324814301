from fractions import Fraction
import random

import pytest
from hypothesis import given, strategies as st

from conftest import all_points
from twinsphere.errors import DomainError, ModulusMismatch, NotOnSphere
from twinsphere.modring import GaussMod
from twinsphere.sphere_group import (
    RationalPoint3,
    SpherePoint,
    add,
    element_order,
    neg,
    phi,
    random_point,
    rational_param,
    rational_param_inv,
    theta,
    theta_inv,
)


def P(*c, n):
    return SpherePoint(c, n)


def test_rejects_off_sphere():
    with pytest.raises(NotOnSphere):
        P(1, 1, 0, 0, n=5)
    assert P(6, 5, 0, 0, n=5).coords == (1, 0, 0, 0)


def test_add_examples():
    X = P(2, 2, 2, 2, n=5)
    O = SpherePoint.identity(5)
    assert add(O, X) == X
    for n in (2, 3, 7, 101):
        T = P(-1, 0, 0, 0, n=n)
        assert add(T, T) == SpherePoint.identity(n)
    assert add(P(0, 1, 0, 0, n=5), P(0, 0, 1, 0, n=5)) == P(0, 0, 0, 4, n=5)


def test_add_matches_matrix_oracle():
    # first row of phi(X) phi(Y) is X (+) Y
    X, Y = P(0, 1, 0, 0, n=5), P(0, 0, 1, 0, n=5)
    assert (phi(X) @ phi(Y)).rows[0] == (0, 0, 0, 4)


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        add(SpherePoint.identity(5), SpherePoint.identity(7))


def test_neg_examples(rng):
    assert neg(SpherePoint.identity(5)) == SpherePoint.identity(5)
    assert neg(P(0, 1, 0, 0, n=5)) == P(0, 4, 0, 0, n=5)
    for _ in range(100):
        X = random_point(101, rng)
        assert add(neg(X), X).is_identity()
        assert add(X, neg(X)).is_identity()


@pytest.mark.parametrize("n", [2, 3])
def test_group_axioms_exhaustive(n):
    pts = all_points(n)
    O = SpherePoint.identity(n)
    for X in pts:
        assert add(O, X) == X == add(X, O)
        assert add(X, neg(X)) == O
        for Y in pts:
            XY = add(X, Y)
            for Z in pts:
                assert add(XY, Z) == add(X, add(Y, Z))


@pytest.mark.parametrize("n", [5, 7, 101, 2**16 + 1])
def test_group_axioms_random(n, rng):
    for _ in range(10_000):
        X, Y, Z = (random_point(n, rng) for _ in range(3))
        assert add(add(X, Y), Z) == add(X, add(Y, Z))
    X = random_point(n, rng)
    assert add(X, neg(X)).is_identity()


@pytest.mark.parametrize("n", range(3, 52, 2))
def test_non_commutative(n):
    X, Y = P(0, 1, 0, 0, n=n), P(0, 0, 1, 0, n=n)
    assert add(X, Y) != add(Y, X)


def test_phi_examples():
    assert phi(SpherePoint.identity(5)).is_identity()
    X = P(0, 1, 0, 0, n=5)
    assert (phi(X) @ phi(X).T).is_identity()


@pytest.mark.parametrize("n", [3, 4, 5])
def test_phi_homomorphism_and_injective(n):
    pts = all_points(n)
    for X in pts:
        M = phi(X)
        assert (M @ M.T).is_identity()
        assert M.det() == 1 % n
        assert M.is_identity() == X.is_identity()
        for Y in pts[::3]:
            assert phi(add(X, Y)) == phi(X) @ phi(Y)


def test_theta_examples():
    I2 = theta(SpherePoint.identity(7))
    one, zero = GaussMod.of(1, 0, 7), GaussMod.of(0, 0, 7)
    assert I2.entries == ((one, zero), (zero, one))
    # alpha conj(alpha) + beta conj(beta) = 8 + 8 = 16 = 1 mod 5
    assert theta(P(2, 2, 2, 2, n=5)).det() == GaussMod.of(1, 0, 5)


def test_theta_transports_group_law_n3():
    pts = all_points(3)
    assert len(pts) == 24
    for X in pts:
        for Y in pts:
            assert theta_inv(theta(X) @ theta(Y)) == add(X, Y)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_theta_det_exhaustive(n):
    for X in all_points(n):
        assert theta(X).det() == GaussMod.of(1, 0, n)


def test_theta_det_random(rng):
    for n in (13, 10**9 + 7):
        for _ in range(200):
            assert theta(random_point(n, rng)).det() == GaussMod.of(1, 0, n)


def test_element_order_examples():
    assert element_order(SpherePoint.identity(5)) == 1
    assert element_order(P(-1, 0, 0, 0, n=5)) == 2
    assert element_order(P(0, 1, 0, 0, n=5)) == 4


def _order_by_iteration(X):
    k, acc = 1, X
    while not acc.is_identity():
        acc, k = add(acc, X), k + 1
    return k


@pytest.mark.parametrize("n", [5, 7, 9, 15])
def test_element_order_matches_iteration(n):
    pts = all_points(n)
    for X in pts[:: max(1, n // 3)]:
        k = element_order(X)
        assert k == _order_by_iteration(X)
        assert len(pts) % k == 0


def test_circle_subgroup_closed_under_group_law():
    for n in (5, 7, 9):
        circle = [X for X in all_points(n) if X.coords[1] == 0 and X.coords[3] == 0]
        members = {X.coords for X in circle}
        for X in circle:
            assert neg(X).coords in members
            for Y in circle:
                assert add(X, Y).coords in members


def test_circle_subgroup_not_normal_p5():
    circle = {X.coords for X in all_points(5) if X.coords[1] == 0 and X.coords[3] == 0}
    g, c = P(0, 1, 1, 2, n=5), P(0, 0, 1, 0, n=5)
    conj = add(add(g, c), neg(g))
    assert conj == P(0, 2, 1, 4, n=5)
    assert conj.coords not in circle


def test_rational_param_examples():
    assert rational_param(RationalPoint3(1, 0, 0)) == (0, 0, 1, 0)
    h = Fraction(1, 2)
    q = rational_param(RationalPoint3(1, 1, 1))
    assert q == (h, h, h, h)
    assert sum(x * x for x in q) == 1


def test_rational_param_domain():
    with pytest.raises(DomainError):
        rational_param(RationalPoint3(0, 1, 1))
    with pytest.raises(DomainError):
        rational_param_inv((Fraction(1), 0, 0, 0))


fractions = st.fractions(max_denominator=10**6).filter(lambda f: abs(f) < 10**6)


@given(fractions.filter(lambda f: f != 0), fractions, fractions)
def test_rational_round_trip(t, u, v):
    p = RationalPoint3(t, u, v)
    q = rational_param(p)
    assert sum(x * x for x in q) == 1
    assert rational_param_inv(q) == p


def test_rational_round_trip_100(rng):
    for _ in range(100):
        t = Fraction(rng.choice([-1, 1]) * rng.randint(1, 999), rng.randint(1, 999))
        u = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
        v = Fraction(rng.randint(-999, 999), rng.randint(1, 999))
        assert rational_param_inv(rational_param(RationalPoint3(t, u, v))) == RationalPoint3(t, u, v)
