"""The twin-prime series omega(s) = sum 1/(1 + |A_n| n^s) and its non-twin part tau(s, m).

|A_n| = prod_{p | 2n+1} E(p) * prod_{p | 2n+3} E(p) - E(2n+1) E(2n+3), E(x) = (1 - 1/x^2)^-1,
vanishes exactly when 2n+1 and 2n+3 are both prime.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Literal, Sequence

import numpy as np

from .counting import euler_factor, odd_euler_product
from .errors import SieveRange
from .sieve import DEFAULT_SPAN, Factorization, base_primes_for, factorize, prime_divisor_sums

log = logging.getLogger(__name__)

TAU3_LIMIT = 0.474004103627
MAX_M = 10**10
EXACT_MAX_M = 10**6


# --- compensated accumulation ------------------------------------------


@dataclass
class NeumaierSum:
    value: float = 0.0
    carry: float = 0.0

    def add(self, x: float) -> None:
        t = self.value + x
        if abs(self.value) >= abs(x):
            self.carry += (self.value - t) + x
        else:
            self.carry += (x - t) + self.value
        self.value = t

    def extend(self, xs: Iterable[float]) -> None:
        for x in xs:
            self.add(x)

    @property
    def total(self) -> float:
        return self.value + self.carry


# --- determinants and summands -----------------------------------------


def log_euler(p):
    """log E(p) = -log1p(-1/p^2); works on floats and arrays."""
    return -np.log1p(-1.0 / (np.asarray(p, dtype=np.float64) ** 2))


def _det_exact(p1: int, p2: int, f1: Factorization, f2: Factorization) -> Fraction:
    return odd_euler_product(p1, f1) * odd_euler_product(p2, f2) - euler_factor(p1) * euler_factor(p2)


def det_A(
    n: int,
    f1: Factorization | None = None,
    f2: Factorization | None = None,
    mode: Literal["float", "exact"] = "float",
) -> float | Fraction:
    """Determinant of A_n from the factorizations of 2n+1 and 2n+3."""
    if n < 1:
        raise ValueError("n must be positive")
    p1, p2 = 2 * n + 1, 2 * n + 3
    f1 = f1 if f1 is not None else factorize(p1)
    f2 = f2 if f2 is not None else factorize(p2)
    for f, p in ((f1, p1), (f2, p2)):
        if f.n != p:
            from .errors import BadFactorization
            raise BadFactorization(f"factorization of {f.n} given for {p}")
    if mode == "exact":
        return _det_exact(p1, p2, f1, f2)
    if f1.pairs == ((p1, 1),) and f2.pairs == ((p2, 1),):
        return 0.0
    d = math.fsum(float(log_euler(p)) for p in f1.primes + f2.primes)
    d += math.log1p(-1.0 / p1**2) + math.log1p(-1.0 / p2**2)
    return _euler_float(p1) * _euler_float(p2) * math.expm1(d)


def _euler_float(x):
    return 1.0 / (1.0 - 1.0 / (np.asarray(x, dtype=np.float64) ** 2))


def summand_F(s: float, n: int, det: float | Fraction) -> float:
    """F(s, n): 0 when |A_n| = 0, else 1 / (1 + |A_n| n^s)."""
    if det == 0:
        return 0.0
    if isinstance(det, Fraction) and float(s).is_integer():
        return float(1 / (1 + det * n ** int(s)))
    return 1.0 / (1.0 + float(det) * float(n) ** s)


def omega_summand(s: float, n: int, det: float | Fraction) -> float:
    return 1.0 if det == 0 else summand_F(s, n, det)


# --- vectorised chunk kernel -------------------------------------------


@dataclass
class ChunkTerms:
    n0: int
    n1: int
    twin: np.ndarray          # bool, twin pair at (2n+1, 2n+3)
    det: np.ndarray           # float64, exactly 0 at twins
    F: dict[float, np.ndarray]


def chunk_terms(n0: int, n1: int, s_list: Sequence[float], base_primes: np.ndarray) -> ChunkTerms:
    """Summands F(s, n) for n0 <= n < n1."""
    count = n1 - n0
    lo = 2 * n0 + 1
    is_p, acc = prime_divisor_sums(lo, count + 1, base_primes, log_euler)
    values = (lo + 2 * np.arange(count + 1, dtype=np.int64)).astype(np.float64)
    # log(prod_{p|m} E(p) / E(m)); exactly 0 for prime m
    d = acc + np.log1p(-1.0 / values**2)
    e = _euler_float(values)
    twin = is_p[:-1] & is_p[1:]
    det = e[:-1] * e[1:] * np.expm1(d[:-1] + d[1:])
    det[twin] = 0.0
    ns = np.arange(n0, n1, dtype=np.float64)
    F = {}
    for s in s_list:
        f = 1.0 / (1.0 + det * ns**s)
        f[twin] = 0.0
        F[s] = f
    return ChunkTerms(n0, n1, twin, det, F)


@dataclass
class ChunkResult:
    index: int
    n1: int
    twin_hits: int
    tau: dict[float, float]


def _chunk_sum(args) -> ChunkResult:
    index, n0, n1, s_list, bp = args
    t = chunk_terms(n0, n1, s_list, bp)
    # fsum is correctly rounded, so a chunk's contribution does not depend on evaluation order
    tau = {s: math.fsum(t.F[s].tolist()) for s in s_list}
    return ChunkResult(index, n1, int(np.count_nonzero(t.twin)), tau)


def chunk_bounds(m: int, chunk: int, checkpoints: Iterable[int] = ()) -> list[tuple[int, int]]:
    """Half-open n-ranges covering 1..m, split at multiples of chunk and at every power of ten."""
    cuts = {m + 1}
    cuts.update(k + 1 for k in range(chunk, m, chunk))
    p = 10
    while p < m:
        cuts.add(p + 1)
        p *= 10
    cuts.update(c + 1 for c in checkpoints if 1 <= c < m)
    edges = [1] + sorted(cuts)
    return list(zip(edges[:-1], edges[1:]))


# --- accumulation ------------------------------------------------------


@dataclass
class SeriesAccumulator:
    s: float
    m: int = 0
    twin_hits: int = 0
    tau: NeumaierSum = field(default_factory=NeumaierSum)
    mode: Literal["float", "exact-audit"] = "float"

    @property
    def tau_value(self) -> float:
        return self.tau.total

    @property
    def omega(self) -> float:
        return self.twin_hits + self.tau.total


@dataclass(frozen=True)
class OmegaPartial:
    omega: float
    pi2: int
    tau: float


def default_threads() -> int:
    env = os.environ.get("TWINSPHERE_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def default_span() -> int:
    env = os.environ.get("TWINSPHERE_SEGMENT_SPAN")
    if env:
        return max(1024, int(env))
    budget = os.environ.get("TWINSPHERE_MEMORY_MB")
    if budget:
        # roughly 56 bytes of working arrays per odd entry and per worker
        return max(1024, int(budget) * 2**20 // 56)
    return DEFAULT_SPAN


def run_series(
    s_list: Sequence[float],
    m: int,
    threads: int | None = None,
    chunk: int | None = None,
    on_checkpoint: Callable[[int, dict[float, SeriesAccumulator]], None] | None = None,
    checkpoints: Iterable[int] = (),
    checkpoint_file: str | os.PathLike | None = None,
    progress: bool = False,
) -> dict[float, SeriesAccumulator]:
    """Accumulate pi_2 and tau(s, m) for several exponents in one sieve pass.

    Chunks are reduced in ascending order, so the result is independent of ``threads``.
    ``on_checkpoint(m_reached, accs)`` fires after every chunk.
    """
    if m < 1:
        raise ValueError("m must be positive")
    if m > MAX_M:
        raise SieveRange(f"m = {m} exceeds the supported range {MAX_M}")
    threads = threads or default_threads()
    chunk = chunk or default_span()
    s_list = list(dict.fromkeys(float(s) for s in s_list))
    bp = base_primes_for(2 * m + 3)
    accs = {s: SeriesAccumulator(s) for s in s_list}
    bounds = chunk_bounds(m, chunk, checkpoints)

    start = 0
    if checkpoint_file is not None:
        start = _resume(checkpoint_file, accs, bounds)
    jobs = [(i, n0, n1, s_list, bp) for i, (n0, n1) in enumerate(bounds) if i >= start]

    def absorb(r: ChunkResult):
        for s, acc in accs.items():
            acc.tau.add(r.tau[s])
            acc.twin_hits += r.twin_hits
            acc.m = r.n1 - 1
        if checkpoint_file is not None:
            _write_checkpoint(checkpoint_file, r.index, accs)
        if progress:
            log.info("series: n <= %d (%d/%d chunks)", r.n1 - 1, r.index + 1, len(bounds))
        if on_checkpoint is not None:
            on_checkpoint(r.n1 - 1, accs)

    if threads <= 1 or len(jobs) <= 1:
        for job in jobs:
            absorb(_chunk_sum(job))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            # map yields in submission order: the reduction is sequential in chunk order
            for r in pool.map(_chunk_sum, jobs):
                absorb(r)
    return accs


def _write_checkpoint(path, index: int, accs: dict[float, SeriesAccumulator]) -> None:
    any_acc = next(iter(accs.values()))
    fields = [f"chunk={index}", f"m={any_acc.m}", f"twin_hits={any_acc.twin_hits}"]
    fields += [f"s={s!r}:{a.tau.value.hex()}:{a.tau.carry.hex()}" for s, a in accs.items()]
    with open(path, "a") as fh:
        fh.write(" ".join(fields) + "\n")


def _resume(path, accs: dict[float, SeriesAccumulator], bounds) -> int:
    p = Path(path)
    if not p.exists():
        return 0
    lines = [ln for ln in p.read_text().splitlines() if ln.strip()]
    if not lines:
        return 0
    rec = dict(tok.split("=", 1) for tok in lines[-1].split())
    index = int(rec["chunk"])
    if index >= len(bounds) or bounds[index][1] - 1 != int(rec["m"]):
        raise ValueError(f"checkpoint {path} does not match the current chunk layout")
    stored = {}
    for tok in lines[-1].split():
        if tok.startswith("s="):
            s, v, c = tok[2:].split(":")
            stored[float(s)] = (float.fromhex(v), float.fromhex(c))
    for s, acc in accs.items():
        if s not in stored:
            raise ValueError(f"checkpoint {path} has no record for s = {s}")
        acc.tau.value, acc.tau.carry = stored[s]
        acc.twin_hits = int(rec["twin_hits"])
        acc.m = int(rec["m"])
    return index + 1


def omega_partial(
    s: float,
    m: int,
    mode: Literal["float", "exact-audit"] = "float",
    threads: int | None = None,
    chunk: int | None = None,
) -> OmegaPartial:
    """Partial sum of omega(s) over n <= m, split as pi_2(2m+3) + tau(s, m)."""
    if mode == "exact-audit":
        return _omega_exact(s, m)
    acc = run_series([s], m, threads=threads, chunk=chunk)[float(s)]
    return OmegaPartial(acc.omega, acc.twin_hits, acc.tau_value)


def _omega_exact(s: float, m: int) -> OmegaPartial:
    """Every summand from exact rationals, correctly rounded, then summed with fsum."""
    if m > EXACT_MAX_M:
        raise SieveRange(f"exact-audit mode supports m <= {EXACT_MAX_M}")
    from .sieve import SpfTable

    table = SpfTable(2 * m + 4)
    terms, twins = [], 0
    for n in range(1, m + 1):
        d = det_A(n, factorize(2 * n + 1, table), factorize(2 * n + 3, table), mode="exact")
        if d == 0:
            twins += 1
        else:
            terms.append(summand_F(s, n, d))
    tau = math.fsum(terms)
    return OmegaPartial(twins + tau, twins, tau)


def summand_arrays(s: float, n_max: int, chunk: int | None = None) -> ChunkTerms:
    """Per-n arrays (twin flags, det, F) for 1 <= n <= n_max, index i holding n = i + 1."""
    chunk = chunk or default_span()
    bp = base_primes_for(2 * n_max + 3)
    parts = [chunk_terms(n0, n1, [s], bp) for n0, n1 in chunk_bounds(n_max, chunk)]
    return ChunkTerms(
        1,
        n_max + 1,
        np.concatenate([p.twin for p in parts]),
        np.concatenate([p.det for p in parts]),
        {float(s): np.concatenate([p.F[s] for p in parts])},
    )


# --- table -------------------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    log10_m: int
    pi2: int
    tau: dict[float, float]


def reproduce_table(
    s_list: Sequence[float] = (1, 2, 3),
    m_exponents: Iterable[int] = range(1, 7),
    threads: int | None = None,
    chunk: int | None = None,
    progress: bool = False,
) -> list[TableRow]:
    """One row per requested decade m = 10^e: pi_2(2m+3) and tau(s, m) for each s."""
    exps = sorted(set(m_exponents))
    if not exps:
        return []
    targets = {10**e: e for e in exps}
    rows: list[TableRow] = []

    def grab(m_reached, accs):
        if m_reached in targets:
            any_acc = next(iter(accs.values()))
            rows.append(TableRow(targets[m_reached], any_acc.twin_hits, {s: a.tau_value for s, a in accs.items()}))

    run_series(s_list, 10 ** exps[-1], threads=threads, chunk=chunk, on_checkpoint=grab,
               checkpoints=targets, progress=progress)
    return rows


def _tau_key(s: float) -> str:
    return f"tau{s:g}"


def table_to_records(rows: Sequence[TableRow]) -> list[dict]:
    return [{"log10_m": r.log10_m, "pi2": r.pi2, **{_tau_key(s): v for s, v in r.tau.items()}} for r in rows]


def format_float(x: float) -> str:
    return f"{x:.15g}"


def table_to_csv(rows: Sequence[TableRow]) -> str:
    recs = table_to_records(rows)
    if not recs:
        return "log10_m,pi2\n"
    header = list(recs[0])
    lines = [",".join(header)]
    for r in recs:
        lines.append(",".join(format_float(v) if isinstance(v, float) else str(v) for v in r.values()))
    return "\n".join(lines) + "\n"


# --- Hardy-Littlewood --------------------------------------------------


@dataclass(frozen=True)
class HLEstimate:
    x: float
    closed_form: float
    integral_form: float
    c2: float


def twin_prime_constant(tol: float = 1e-15) -> float:
    """C_2 = prod_{p >= 3} (1 - 1/(p - 1)^2).

    Primes below 1000 are multiplied directly; the tail uses
    log(1 - 1/(p-1)^2) = -sum_k (2^k - 2)/k p^-k summed against the prime zeta function.
    """
    import mpmath

    cutoff = 1000
    with mpmath.workdps(40):
        ps = [int(p) for p in base_primes_for(cutoff * cutoff) if p < cutoff]
        head = mpmath.fsum(mpmath.log(1 - mpmath.mpf(1) / (p - 1) ** 2) for p in ps)
        tail = mpmath.mpf(0)
        k = 2
        while True:
            pz = mpmath.primezeta(k) - mpmath.mpf(2) ** -k - mpmath.fsum(mpmath.mpf(p) ** -k for p in ps)
            term = (mpmath.mpf(2) ** k - 2) / k * pz
            tail -= term
            if abs(term) < tol * 1e-3:
                break
            k += 1
        return float(mpmath.exp(head + tail))


def twin_prime_constant_truncated(limit: int) -> float:
    """Plain product over 3 <= p <= limit; converges like 1/(limit log limit)."""
    ps = base_primes_for(limit * limit)
    ps = ps[ps <= limit].astype(np.float64)
    return float(np.exp(np.sum(np.log1p(-1.0 / (ps - 1.0) ** 2))))


def hl_estimate(x: float) -> HLEstimate:
    """Hardy-Littlewood estimates 2 C2 x / log^2 x and 2 C2 int_2^x dt / log^2 t."""
    from scipy.integrate import quad

    if x <= 2:
        raise ValueError("x must exceed 2")
    c2 = twin_prime_constant()
    closed = 2 * c2 * x / math.log(x) ** 2
    integral, _ = quad(lambda t: 1.0 / math.log(t) ** 2, 2.0, x, limit=200)
    return HLEstimate(x, closed, 2 * c2 * integral, c2)


# --- conjecture scans --------------------------------------------------


@dataclass(frozen=True)
class ConjectureRow:
    m: int
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs


def check_conjectures(
    which: Literal["a", "b"],
    s: float,
    m_values: Iterable[int],
    tau3: float = TAU3_LIMIT,
) -> list[ConjectureRow]:
    """Evaluate both sides of the block inequality over n = m..2m for each m.

    (a): 1 + tau(3) < sum_{n=m}^{2m} 1/(1 + |A_n| n^3)   (s is ignored, always 3)
    (b): sum_{n=m}^{2m} 1/log^2(n+1) < sum_{n=m}^{2m} 1/(1 + |A_n| n^s)
    """
    ms = sorted(set(m_values))
    if not ms:
        return []
    if ms[0] < 1:
        raise ValueError("m must be positive")
    if which == "a":
        s = 3.0
    elif which != "b":
        raise ValueError(f"unknown conjecture {which!r}")
    n_max = 2 * ms[-1]
    if n_max > 10**9:
        raise SieveRange("conjecture scans support 2m <= 1e9")
    t = summand_arrays(s, n_max)
    omega_terms = np.where(t.twin, 1.0, t.F[float(s)])
    rows = []
    for m in ms:
        rhs = math.fsum(omega_terms[m - 1 : 2 * m].tolist())
        if which == "a":
            lhs = 1.0 + tau3
        else:
            n = np.arange(m, 2 * m + 1, dtype=np.float64)
            lhs = math.fsum((1.0 / np.log(n + 1.0) ** 2).tolist())
        rows.append(ConjectureRow(m, lhs, rhs))
    return rows


# --- determinant bounds ------------------------------------------------


@dataclass(frozen=True)
class DetBoundReport:
    n_max: int
    max_det: float
    argmax: int
    upper_bound: float
    upper_holds: bool
    lower_checked: int
    lower_equalities: int
    lower_violations: list[int]


def scan_det_bounds(n_max: int) -> DetBoundReport:
    """Scan pi^2/6 - 1 > |A_n| for all n <= n_max, and the lower bound
    E(2n+1) E(sqrt(2n+3)) - g^2/h at the n where 2n+1 and sqrt(2n+3) are both prime.

    The lower bound is compared in exact arithmetic: at those n it coincides with |A_n|.
    """
    from .sieve import is_prime

    t = summand_arrays(3.0, n_max)
    det = t.det
    i = int(np.argmax(det))
    ub = math.pi**2 / 6 - 1
    checked, equal, bad = 0, 0, []
    q = 3
    while q * q - 3 <= 2 * n_max:
        n = (q * q - 3) // 2
        if n >= 1 and is_prime(q) and is_prime(2 * n + 1):
            g = (2 * n + 1) * (2 * n + 3)
            h = (g - 1) ** 2 - 4
            bound = euler_factor(2 * n + 1) * euler_factor(q) - Fraction(g * g, h)
            exact = det_A(n, mode="exact")
            checked += 1
            equal += exact == bound
            if exact < bound:
                bad.append(n)
        q += 2
    return DetBoundReport(n_max, float(det[i]), i + 1, ub, bool(np.all(det < ub)), checked, equal, bad)
