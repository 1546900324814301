"""Finite-group structure of S(Z/p): the central subgroup H, quotients, A4/A5, circle cosets."""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from itertools import permutations, product
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import LimitExceeded
from .sieve import is_prime
from .sphere_group import SpherePoint, add, neg

MAX_P = 31
MAX_ORDER = 200

# coset representatives of S(Z/3)/H in the reference order and labelling
REFERENCE_P3_LABELS = "HIJKABCDUVWX"
REFERENCE_P3_REPS = (
    (1, 0, 0, 0), (0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0),
    (1, 1, 1, 1), (1, 2, 1, 2), (1, 1, 2, 2), (1, 2, 2, 1),
    (1, 1, 1, 2), (1, 1, 2, 1), (1, 2, 2, 2), (1, 2, 1, 1),
)
REFERENCE_P3_TABLE = """\
H I J K A B C D U V W X
I H K J B A D C V U X W
J K H I C D A B W X U V
K J I H D C B A X W V U
A C D B W U V X K I H J
B D C A X V U W J H I K
C A B D U W X V I K J H
D B A C V X W U H J K I
U X V W J I K H D A C B
V W U X K H J I C B D A
W V X U H K I J B C A D
X U W V I J H K A D B C
"""


@dataclass
class FiniteGroupTable:
    labels: list[str]
    table: np.ndarray
    identity: int

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=np.int64)
        k = len(self.labels)
        T = self.table
        if T.shape != (k, k):
            raise ValueError(f"table shape {T.shape} does not match {k} labels")
        ref = np.arange(k)
        if not (np.all(np.sort(T, axis=1) == ref) and np.all(np.sort(T, axis=0) == ref[:, None])):
            raise ValueError("Cayley table is not a Latin square")
        if not (np.all(T[self.identity] == ref) and np.all(T[:, self.identity] == ref)):
            raise ValueError("identity row/column is not the identity permutation")
        if k <= MAX_ORDER and not lights_test(T, generating_set(T, self.identity)):
            raise ValueError("operation is not associative")

    def __len__(self):
        return len(self.labels)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(np.flatnonzero(self.table[a] == self.identity)[0])

    def order_of(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = int(self.table[x, a])
            k += 1
        return k

    def order_profile(self) -> Counter:
        return Counter(self.order_of(a) for a in range(len(self)))

    def to_text(self, symbol: str = "+") -> str:
        w = max(len(s) for s in self.labels + [symbol])
        head = f"{symbol:>{w}} | " + " ".join(f"{s:>{w}}" for s in self.labels)
        lines = [head, "-" * len(head)]
        for i, s in enumerate(self.labels):
            lines.append(f"{s:>{w}} | " + " ".join(f"{self.labels[j]:>{w}}" for j in self.table[i]))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps({"labels": self.labels, "identity": self.identity, "table": self.table.tolist()})

    @classmethod
    def from_operation(cls, elements: Sequence[Hashable], op: Callable, labels: Sequence[str] | None = None,
                       identity: Hashable | None = None) -> FiniteGroupTable:
        index = {e: i for i, e in enumerate(elements)}
        table = [[index[op(a, b)] for b in elements] for a in elements]
        labels = list(labels) if labels is not None else [str(e) for e in elements]
        if identity is None:
            identity = next(e for e in elements if all(op(e, b) == b for b in elements))
        return cls(labels, np.array(table), index[identity])


def generated_subgroup(T: np.ndarray, identity: int, gens: Sequence[int]) -> set[int]:
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(T[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def generating_set(T: np.ndarray, identity: int, orders: Sequence[int] | None = None) -> list[int]:
    """Greedy generating set, preferring elements of large order."""
    k = len(T)
    candidates = range(k) if orders is None else sorted(range(k), key=lambda a: (-orders[a], a))
    gens: list[int] = []
    span = {identity}
    for a in candidates:
        if len(span) == k:
            break
        if a not in span:
            gens.append(a)
            span = generated_subgroup(T, identity, gens)
    return gens


def lights_test(T: np.ndarray, gens: Sequence[int]) -> bool:
    """(x g) y == x (g y) for every generator g and all x, y."""
    return all(np.array_equal(T[T[:, g], :], T[:, T[g, :]]) for g in gens)


# --- groups --------------------------------------------------------------


def _check_p(p: int) -> None:
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if p > MAX_P:
        raise LimitExceeded(f"p = {p} exceeds the enumeration limit {MAX_P}")


def enumerate_sphere(p: int) -> list[SpherePoint]:
    """All points of S(Z/p) in lexicographic order."""
    _check_p(p)
    r = np.arange(p)
    sq = r * r % p
    grid = np.stack(np.meshgrid(r, r, r, r, indexing="ij"), axis=-1).reshape(-1, 4)
    ok = (sq[grid].sum(axis=1) % p) == 1
    return [SpherePoint(tuple(c), p) for c in grid[ok].tolist()]


def _negate(X: SpherePoint) -> SpherePoint:
    # T (+) X with T = (-1, 0, 0, 0)
    return SpherePoint(tuple(-c for c in X.coords), X.modulus)


def quotient_by_H(p: int) -> FiniteGroupTable:
    """S(Z/p) / {O, T}; for p = 3 the cosets carry the reference labels H, I, ..., X in that order."""
    _check_p(p)
    if p == 3:
        reps = [SpherePoint(c, p) for c in REFERENCE_P3_REPS]
        labels = list(REFERENCE_P3_LABELS)
    else:
        reps, seen = [], set()
        for X in enumerate_sphere(p):
            if X.coords not in seen:
                reps.append(X)
                seen.update((X.coords, _negate(X).coords))
        labels = [str(X) for X in reps]
    index = {}
    for i, X in enumerate(reps):
        index[X.coords] = i
        index[_negate(X).coords] = i
    if len(index) != len(enumerate_sphere(p)):
        raise AssertionError("representatives do not cover the group")
    table = np.array([[index[add(X, Y).coords] for Y in reps] for X in reps])
    return FiniteGroupTable(labels, table, index[(1, 0, 0, 0)])


def reference_p3_table() -> FiniteGroupTable:
    """The reference 12 x 12 Cayley table of S(Z/3)/H, parsed from its text grid."""
    pos = {s: i for i, s in enumerate(REFERENCE_P3_LABELS)}
    rows = [[pos[s] for s in line.split()] for line in REFERENCE_P3_TABLE.strip().splitlines()]
    return FiniteGroupTable(list(REFERENCE_P3_LABELS), np.array(rows), 0)


def _parity(perm: Sequence[int]) -> int:
    return sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j]) % 2


def alternating_group(k: int) -> FiniteGroupTable:
    """Even permutations of k symbols in lexicographic order; (s t)(i) = s(t(i))."""
    if k not in (4, 5):
        raise ValueError("only A4 and A5 are supported")
    elems = [q for q in permutations(range(k)) if _parity(q) == 0]
    return FiniteGroupTable.from_operation(
        elems,
        lambda s, t: tuple(s[t[i]] for i in range(k)),
        labels=["".join(map(str, q)) for q in elems],
        identity=tuple(range(k)),
    )


def cyclic_group(k: int) -> FiniteGroupTable:
    r = np.arange(k)
    return FiniteGroupTable([str(i) for i in range(k)], (r[:, None] + r[None, :]) % k, 0)


def is_isomorphic(G: FiniteGroupTable, K: FiniteGroupTable) -> dict[int, int] | None:
    """An isomorphism G -> K as an index mapping, or None.

    Backtracks over images of a generating set of G, pruned by element orders.
    """
    k = len(G)
    if k != len(K):
        return None
    if k > MAX_ORDER:
        raise LimitExceeded(f"isomorphism search is capped at order {MAX_ORDER}")
    og = [G.order_of(a) for a in range(k)]
    ok = [K.order_of(a) for a in range(k)]
    if Counter(og) != Counter(ok):
        return None
    gens = generating_set(G.table, G.identity, og)
    by_order: dict[int, list[int]] = {}
    for b in range(k):
        by_order.setdefault(ok[b], []).append(b)

    def extend(images: list[int]) -> np.ndarray | None:
        f = np.full(k, -1, dtype=np.int64)
        f[G.identity] = K.identity
        frontier = [G.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, h in zip(gens, images):
                    y = int(G.table[x, g])
                    fy = int(K.table[f[x], h])
                    if f[y] == -1:
                        f[y] = fy
                        nxt.append(y)
                    elif f[y] != fy:
                        return None
            frontier = nxt
        if len(set(f.tolist())) != k:
            return None
        if not np.array_equal(f[G.table], K.table[np.ix_(f, f)]):
            return None
        return f

    def search(images: list[int]) -> np.ndarray | None:
        if len(images) == len(gens):
            return extend(images)
        for h in by_order[og[gens[len(images)]]]:
            f = search(images + [h])
            if f is not None:
                return f
        return None

    f = search([])
    return None if f is None else {a: int(b) for a, b in enumerate(f)}


# --- subgroups -----------------------------------------------------------


def conjugate(g: SpherePoint, h: SpherePoint) -> SpherePoint:
    """g (+) h (-) g."""
    return add(add(g, h), neg(g))


def h_is_normal(p: int) -> bool:
    group = enumerate_sphere(p)
    H = {(1, 0, 0, 0), (p - 1, 0, 0, 0)}
    return all(conjugate(g, SpherePoint(h, p)).coords in H for g in group for h in H)


def circle_subgroup(p: int) -> list[SpherePoint]:
    """Points (x1, 0, x3, 0), a copy of the unit circle x1^2 + x3^2 = 1."""
    _check_p(p)
    return [SpherePoint((a, 0, c, 0), p) for a, c in product(range(p), repeat=2) if (a * a + c * c) % p == 1]


def non_normal_witness(p: int) -> tuple[SpherePoint, SpherePoint, SpherePoint] | None:
    """(g, c, g (+) c (-) g) with c in the circle subgroup and the conjugate outside it."""
    circle = circle_subgroup(p)
    members = {c.coords for c in circle}
    for g in enumerate_sphere(p):
        for c in circle:
            x = conjugate(g, c)
            if x.coords not in members:
                return g, c, x
    return None


@dataclass(frozen=True)
class CosetPartition:
    subgroup: tuple[int, ...]
    cosets: tuple[tuple[int, ...], ...]


def left_cosets(group: Sequence[SpherePoint], subgroup: Sequence[SpherePoint]) -> CosetPartition:
    index = {X.coords: i for i, X in enumerate(group)}
    sub = tuple(index[c.coords] for c in subgroup)
    seen: set[int] = set()
    cosets = []
    for g in group:
        if index[g.coords] in seen:
            continue
        coset = tuple(sorted(index[add(g, c).coords] for c in subgroup))
        seen.update(coset)
        cosets.append(coset)
    return CosetPartition(sub, tuple(cosets))


@dataclass(frozen=True)
class CosetReport:
    p: int
    circle_order: int
    sphere2_count: int
    coset_count: int


def circle_and_coset_report(p: int) -> CosetReport:
    """|C(Z/p)|, |S2(Z/p)| and the number of cosets of C in S(Z/p), all by enumeration."""
    _check_p(p)
    circle = circle_subgroup(p)
    sphere2 = sum(1 for x, y, z in product(range(p), repeat=3) if (x * x + y * y + z * z) % p == 1)
    part = left_cosets(enumerate_sphere(p), circle)
    sizes = {len(c) for c in part.cosets}
    if sizes != {len(circle)}:
        raise AssertionError("cosets are not equal-sized")
    report = CosetReport(p, len(circle), sphere2, len(part.cosets))
    if (p**3 - p) // report.circle_order != report.sphere2_count:
        raise AssertionError(f"coset count does not match the 2-sphere count at p = {p}")
    return report
