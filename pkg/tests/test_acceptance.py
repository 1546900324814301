"""Exit criteria for the primary component; one summary line per criterion."""
import math
import random
import time

import numpy as np
import pytest

from conftest import all_points
from twinsphere.chebyshev import cheb_eval, scalar_mul
from twinsphere.counting import prime_test_sphere, r4_bruteforce, r4_formula, twin_test_sphere
from twinsphere.fit import REFERENCE_MODEL, fit_tau2_model, tau2_model
from twinsphere.modring import GaussMod, ModInt
from twinsphere.series import det_A, reproduce_table, run_series, summand_arrays
from twinsphere.sieve import SpfTable, factorize
from twinsphere.sphere_group import SpherePoint, add, neg, phi, random_point, theta
from twinsphere.structure import (
    alternating_group,
    circle_and_coset_report,
    is_isomorphic,
    reference_p3_table,
    quotient_by_H,
)

# reference rows: log10(m) -> (pi2, tau1 (3 decimals), tau2, tau3)
REFERENCE_ROWS = {
    1: (4, 3.225, 1.238501511411617, 0.424789649215940),
    2: (15, 18.619, 2.088852995430603, 0.472943322728998),
    3: (61, 65.555, 2.305530261242241, 0.473970392946628),
    4: (342, 229.208, 2.377134528816283, 0.474002620057820),
    5: (2160, 982.657, 2.409562315521043, 0.474004021326231),
    6: (14871, 5166.336, 2.427525024274653, 0.474004098679028),
}
ROW7 = (107407, 0.474004103304255)


@pytest.fixture
def record(acceptance_log):
    def _record(number, name, ok, detail=""):
        acceptance_log.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {name}{': ' + detail if detail else ''}")
        print(acceptance_log[-1])
        assert ok, detail
    return _record


def test_1_table_reproduction(record):
    t0 = time.perf_counter()
    rows = reproduce_table((1, 2, 3), range(1, 7), threads=1)
    elapsed = time.perf_counter() - t0
    worst = {"tau1": 0.0, "tau2": 0.0, "tau3": 0.0}
    ok = len(rows) == 6
    for r in rows:
        pi2, t1, t2, t3 = REFERENCE_ROWS[r.log10_m]
        ok &= r.pi2 == pi2
        for key, got, want in (("tau1", r.tau[1.0], t1), ("tau2", r.tau[2.0], t2), ("tau3", r.tau[3.0], t3)):
            worst[key] = max(worst[key], abs(got - want))
    ok &= worst["tau3"] <= 1e-9 and worst["tau2"] <= 1e-9 and worst["tau1"] <= 1e-2 and elapsed < 120
    record(1, "table m=10^1..10^6", ok,
           f"pi2 exact, max|dtau3|={worst['tau3']:.1e}, max|dtau2|={worst['tau2']:.1e}, "
           f"max|dtau1|={worst['tau1']:.1e}, {elapsed:.1f}s single-threaded")


@pytest.mark.slow
def test_1b_optional_row_1e7(record):
    acc = run_series([3], 10**7)[3.0]
    ok = acc.twin_hits == ROW7[0] and abs(acc.tau_value - ROW7[1]) <= 1e-9
    record("1b", "optional row m=10^7", ok, f"pi2={acc.twin_hits}, |dtau3|={abs(acc.tau_value - ROW7[1]):.1e}")


def test_2_counting_oracle(record):
    bad = [n for n in range(1, 501) if r4_bruteforce(n) != r4_formula(n)]
    record(2, "r4 enumeration == formula, n <= 500", not bad, f"{len(bad)} mismatches")


def test_3_primality_criterion(record):
    table = SpfTable(2100)
    bad = [n for n in range(3, 2001, 2) if prime_test_sphere(n, "enumerate") != table.is_prime(n)]
    record(3, "sphere primality criterion, odd n <= 2000", not bad, f"{len(bad)} disagreements")


def test_4_twin_criterion(record):
    table = SpfTable(2100)
    bad = [n for n in range(3, 2001, 2)
           if twin_test_sphere(n) != (table.is_prime(n) and table.is_prime(n + 2))]
    record(4, "twin criterion (exact rationals), odd n <= 2000", not bad, f"{len(bad)} disagreements")


def _exhaustive_axioms(n):
    pts = all_points(n)
    idx = {X.coords: i for i, X in enumerate(pts)}
    T = np.array([[idx[add(X, Y).coords] for Y in pts] for X in pts])
    e = idx[(1, 0, 0, 0)]
    # (XY)Z == X(YZ) for every triple, read off the Cayley table
    lhs = T[T]                      # lhs[a, b, c] = T[T[a, b], c]
    rhs = T[:, T]                   # rhs[a, b, c] = T[a, T[b, c]]
    inverses = all(T[i, idx[neg(X).coords]] == e for i, X in enumerate(pts))
    identity = np.array_equal(T[e], np.arange(len(pts))) and np.array_equal(T[:, e], np.arange(len(pts)))
    return len(pts), bool(np.array_equal(lhs, rhs)) and inverses and identity


def test_5_group_axioms_and_embeddings(record):
    sizes, ok = [], True
    for n in (3, 5):
        size, good = _exhaustive_axioms(n)
        sizes.append(size)
        ok &= good
    ok &= sizes == [24, 120]
    rng = random.Random(5)
    p = 10**9 + 7
    one = GaussMod.of(1, 0, p)
    hom = det1 = 0
    for _ in range(10_000):
        X, Y = random_point(p, rng), random_point(p, rng)
        hom += phi(add(X, Y)) == phi(X) @ phi(Y)
        det1 += theta(X).det() == one
    ok &= hom == det1 == 10_000
    record(5, "group axioms n=3,5 exhaustive; phi/theta at n=1e9+7", ok,
           f"orders {sizes}, phi hom {hom}/10000, det theta=1 {det1}/10000")


def test_6_chebyshev(record):
    rng = random.Random(6)
    ok, checked = True, 0
    for n in (3, 5, 7, 11):
        pts = all_points(n)
        for X in rng.sample(pts, min(50, len(pts))):
            acc = SpherePoint.identity(n)
            for k in range(65):
                ok &= scalar_mul(X, k) == acc
                acc = add(acc, X)
                checked += 1
    p = 10**9 + 7
    ident = 0
    for _ in range(20):
        x = rng.randrange(p)
        T, U = [1, x], [0, 1]          # T_j ; U[j + 1] = U_j
        for _ in range(110):
            T.append((2 * x * T[-1] - T[-2]) % p)
            U.append((2 * x * U[-1] - U[-2]) % p)
        u = lambda j: U[j + 1]
        for j in range(1, 51):
            a = x * u(j) - u(j - 1)
            ok &= T[2 * j - 1] == (2 * T[j] * T[j - 1] - x) % p
            ok &= T[2 * j] == (2 * T[j] ** 2 - 1) % p
            ok &= T[2 * j + 1] == (2 * (2 * x * T[j] - T[j - 1]) * T[j] - x) % p
            ok &= u(2 * j - 1) == (2 * a * (2 * x * u(j - 1) - u(j)) + 2 * x) % p
            ok &= u(2 * j) == (2 * u(j - 1) * a + 1) % p
            ok &= u(2 * j + 1) == (2 * u(j) * a) % p
            ident += 6
        for k in range(0, 101):
            c = cheb_eval(ModInt(x, p), k)
            ok &= c.t.value == T[k] and c.u.value == U[k]
    record(6, "scalar_mul == iterated add; six doubling identities mod 1e9+7", ok,
           f"{checked} multiples, {ident} identity instances")


def test_7_structure(record):
    q3 = quotient_by_H(3)
    cells = int(np.sum(q3.table == reference_p3_table().table))
    a4 = is_isomorphic(q3, alternating_group(4)) is not None
    a5 = is_isomorphic(quotient_by_H(5), alternating_group(5)) is not None
    r = circle_and_coset_report(3)
    cos = (r.circle_order, r.sphere2_count, r.coset_count)
    ok = cells == 144 and a4 and a5 and cos == (4, 6, 6)
    record(7, "quotient p=3 vs reference Cayley table; A4/A5; cosets p=3", ok,
           f"{cells}/144 cells, A4 {a4}, A5 {a5}, cosets {cos}")


def test_8_series_internals(record):
    n_max = 10**6
    t = summand_arrays(3.0, n_max)
    rng = random.Random(8)
    table = SpfTable(2 * n_max + 4)
    non_twin = np.flatnonzero(~t.twin) + 1
    worst = 0.0
    for n in rng.sample(non_twin.tolist(), 10_000):
        exact = det_A(n, factorize(2 * n + 1, table), factorize(2 * n + 3, table), mode="exact")
        worst = max(worst, float(abs(t.det[n - 1] - exact) / exact))
    ns = np.arange(1, n_max + 1, dtype=np.float64)
    F = t.F[3.0]
    bound_ok = bool(np.all(F[~t.twin] < 3.0 / ns[~t.twin] ** 2))
    runs = [run_series([1, 2, 3], n_max, threads=k, chunk=65_536) for k in (1, 4)]
    same = all(runs[0][s].tau.value == runs[1][s].tau.value and runs[0][s].tau.carry == runs[1][s].tau.carry
               for s in (1.0, 2.0, 3.0))
    ok = worst <= 1e-12 and bound_ok and same
    record(8, "det float vs exact; F(3,n) < 3/n^2; thread determinism", ok,
           f"max rel err {worst:.1e}, bound holds {bound_ok}, bit-identical {same}")


def test_9_model_fit(record):
    xs = range(1, 11)
    f = fit_tau2_model([(x, tau2_model(x, *REFERENCE_MODEL)) for x in xs])
    err = max(abs(f.a - REFERENCE_MODEL[0]), abs(f.b - REFERENCE_MODEL[1]), abs(f.c - REFERENCE_MODEL[2]))
    rows = reproduce_table((2,), range(1, 7))
    own = fit_tau2_model([(r.log10_m, r.tau[2.0]) for r in rows])
    within = abs(own.a - 2.47299) <= 0.15
    # the own-data window is reported only; the recovery property is the hard gate
    record(9, "tau2 model: synthetic recovery (own-data fit reported)", err <= 1e-6,
           f"max coeff err {err:.1e}; own data x<=6: a={own.a:.5f} b={own.b:.5f} c={own.c:.5f} "
           f"({'within' if within else 'outside'} 2.47299 +/- 0.15)")
