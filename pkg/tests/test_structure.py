from collections import Counter

import numpy as np
import pytest

from twinsphere.errors import LimitExceeded
from twinsphere.counting import r4_formula
from twinsphere.sphere_group import SpherePoint, add
from twinsphere.structure import (
    REFERENCE_P3_LABELS,
    FiniteGroupTable,
    alternating_group,
    circle_and_coset_report,
    cyclic_group,
    enumerate_sphere,
    h_is_normal,
    is_isomorphic,
    non_normal_witness,
    reference_p3_table,
    quotient_by_H,
)


@pytest.mark.parametrize("p,count", [(3, 24), (5, 120), (7, 336)])
def test_enumerate_sphere(p, count):
    pts = enumerate_sphere(p)
    assert len(pts) == count == r4_formula(p)
    assert [X.coords for X in pts] == sorted(X.coords for X in pts)


def test_enumerate_limits():
    with pytest.raises(LimitExceeded):
        enumerate_sphere(37)
    with pytest.raises(ValueError):
        enumerate_sphere(9)


def test_quotient_orders():
    assert len(quotient_by_H(3)) == 12
    assert len(quotient_by_H(5)) == 60


def test_quotient_p3_matches_reference_table():
    q = quotient_by_H(3)
    assert q.labels == list(REFERENCE_P3_LABELS)
    assert np.array_equal(q.table, reference_p3_table().table)
    a, b = q.labels.index("A"), q.labels.index("B")
    # printed row A reads "A C D B W U V X K I H J" under columns H I J K A B C D U V W X
    assert q.labels[q.mul(a, b)] == "U"
    assert q.labels[q.mul(a, a)] == "W"


def test_text_export_layout():
    lines = quotient_by_H(3).to_text().splitlines()
    assert lines[0].split() == ["+", "|"] + list(REFERENCE_P3_LABELS)
    assert lines[6].split() == ["A", "|"] + "A C D B W U V X K I H J".split()


def test_alternating_groups():
    a4, a5 = alternating_group(4), alternating_group(5)
    assert len(a4) == 12 and len(a5) == 60
    assert a4.order_profile() == Counter({1: 1, 2: 3, 3: 8})
    with pytest.raises(ValueError):
        alternating_group(6)


def test_isomorphisms():
    f = is_isomorphic(quotient_by_H(3), alternating_group(4))
    assert f is not None and sorted(f.values()) == list(range(12))
    assert is_isomorphic(quotient_by_H(5), alternating_group(5)) is not None
    assert is_isomorphic(alternating_group(4), cyclic_group(12)) is None


def test_isomorphism_is_homomorphism():
    G, K = quotient_by_H(5), alternating_group(5)
    f = is_isomorphic(G, K)
    for a in range(60):
        for b in range(60):
            assert f[G.mul(a, b)] == K.mul(f[a], f[b])


def test_non_isomorphic_same_order():
    # Z/4 x Z/3 (cyclic) vs A4: same order, different order profile
    assert is_isomorphic(cyclic_group(12), alternating_group(4)) is None


def test_table_validation():
    with pytest.raises(ValueError):
        FiniteGroupTable(["a", "b"], np.array([[0, 1], [0, 1]]), 0)
    # Latin square with identity that is not associative (a loop of order 5)
    loop = np.array([
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ])
    with pytest.raises(ValueError, match="associative"):
        FiniteGroupTable(list("abcde"), loop, 0)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_h_normal(p):
    assert h_is_normal(p)


@pytest.mark.parametrize("p", [5, 7])
def test_circle_not_normal(p):
    g, c, x = non_normal_witness(p)
    assert x == add(add(g, c), -g)
    assert x.coords[1] != 0 or x.coords[3] != 0


@pytest.mark.parametrize("p,want", [(3, (4, 6, 6)), (5, (4, 30, 30)), (7, (8, 42, 42))])
def test_coset_report(p, want):
    r = circle_and_coset_report(p)
    assert (r.circle_order, r.sphere2_count, r.coset_count) == want


def test_pattern_stops_at_7():
    from math import factorial
    k = (7**3 - 7) // 2
    assert k == 168
    assert all(factorial(j) // 2 != k for j in range(1, 10))
