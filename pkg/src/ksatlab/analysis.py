"""Good variables and the closed-form quantities around them.

Counts are carried as log2 values; probabilities are linear.  ``log`` is
base 2 throughout and entropy is in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from . import _kernels
from .core import Formula, RootsNotFound, as_assignment

LN2 = math.log(2.0)


@dataclass(frozen=True)
class GoodVariableReport:
    good_set: frozenset[int]
    witness: dict[int, int]  # variable -> index of its first critical max-index clause
    good_count: int


@dataclass(frozen=True)
class RegimeParams:
    n: int
    k: int
    m: int
    alpha_sat_est: float
    alpha_d: float
    z: float | None  # None below m = n 2^k
    z_prime: float | None
    t: float


def critical_variable(clause, sigma) -> int | None:
    """The variable whose literal is the only one ``sigma`` satisfies, else ``None``."""
    sigma = np.asarray(sigma)
    hit = None
    for lit in clause:
        if lit == 0:
            continue
        v = abs(lit)
        if (sigma[v - 1] == 1) == (lit > 0):
            if hit is not None:
                return None
            hit = v
    return hit


def critical_max_mask(F: Formula, sigma) -> np.ndarray:
    """Per clause: critical w.r.t. its largest-index variable."""
    sigma = as_assignment(sigma, F.n)
    lits = F.lits
    if lits.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    present = lits != 0
    sat = present & ((sigma[np.abs(lits) - 1] == 1) == (lits > 0))
    # clauses are sorted by variable and zero-padded on the right
    last = F.widths - 1
    rows = np.arange(lits.shape[0])
    last_sat = np.where(last >= 0, sat[rows, np.maximum(last, 0)], False)
    return (sat.sum(axis=1) == 1) & last_sat


def _witnesses(F: Formula, sigma) -> np.ndarray:
    sigma = as_assignment(sigma, F.n)
    return _kernels.critical_max_witness(F.lits, sigma, F.n)


def good_variables(F: Formula, sigma) -> GoodVariableReport:
    wit = _witnesses(F, sigma)
    witness = {int(v) + 1: int(wit[v]) for v in np.flatnonzero(wit >= 0)}
    return GoodVariableReport(frozenset(witness), witness, len(witness))


def good_count(F: Formula, sigma) -> int:
    return int((_witnesses(F, sigma) >= 0).sum())


def expected_solutions_log2(n: int, k: int, m: int) -> float:
    """log2 of 2^n (1 - 2^-k)^m, the mean model count of R(n, k, m)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    return n + m * math.log2(1.0 - 2.0**-k)


def clause_miss_prob(i: int, n: int, k: int) -> float:
    """(1 - (1 - i/n)^k) / (2^k - 1): miss probability with the clause's variables drawn independently.

    Used by the E[Z] bound.  It never exceeds :func:`clause_miss_prob_exact`,
    so bounds built on ``exp(-m q)`` stay valid.
    """
    if not 0 <= i <= n:
        raise ValueError("need 0 <= i <= n")
    return -math.expm1(k * math.log1p(-i / n)) / (2**k - 1) if i < n else 1.0 / (2**k - 1)


def clause_miss_prob_exact(i: int, n: int, k: int) -> float:
    """P(a uniform sigma-satisfying clause is falsified by x), with dist(x, sigma) = i.

    x falsifies the clause iff the variable set meets the i flipped
    variables and every literal takes the sign x rejects.
    """
    if not 0 <= i <= n:
        raise ValueError("need 0 <= i <= n")
    return (1.0 - math.comb(n - i, k) / math.comb(n, k)) / (2**k - 1)


def prob_clause_makes_good(i: int, n: int, k: int) -> float:
    """P(a uniform sigma-satisfying clause is critical for x_i with i its largest index)."""
    if i < k:
        raise ValueError(f"need i >= k, got i={i}, k={k}")
    if i > n:
        raise ValueError("need i <= n")
    return math.comb(i - 1, k - 1) / (math.comb(n, k) * (2**k - 1))


def expected_good_count(n: int, k: int, m: int) -> float:
    """Exact mean number of good variables of P(n, k, m, sigma).

    Variable x_i is good unless none of the m clauses is one of the
    C(i-1, k-1) clauses that would make it good; sum over i.
    """
    i = np.arange(k, n + 1)
    q = np.exp(special.gammaln(i) - special.gammaln(k) - special.gammaln(i - k + 1))
    q = q / (math.comb(n, k) * (2.0**k - 1))
    return float(-np.expm1(m * np.log1p(-q)).sum())


def binary_entropy(p) -> np.ndarray | float:
    """H(p) in bits, with H(0) = H(1) = 0."""
    p = np.asarray(p, dtype=float)
    # (1 - p) ln(1 - p) via log1p keeps the ~p/ln2 contribution for tiny p
    h = (special.entr(p) - special.xlog1py(1.0 - p, -p)) / LN2
    return float(h) if h.ndim == 0 else h


def _entropy_deficit(p):
    # 1 - H(p) without cancellation near p = 1/2
    d = 2.0 * p - 1.0
    return (2.0 * d * np.arctanh(d) + np.log1p(-d * d)) / (2.0 * LN2)


def f_p(p, k: int):
    """f(p) = H(p) - 1 + (1 - p)^k, evaluated without cancellation at both ends."""
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        tail = np.exp(k * np.log1p(-p))
        low = binary_entropy(p) + np.expm1(k * np.log1p(-p))
        mid = tail - _entropy_deficit(np.clip(p, 0.25, 0.75))
    out = np.where((p >= 0.25) & (p <= 0.75), mid, low)
    return float(out) if out.ndim == 0 else out


def f_p_prime(p, k: int):
    """df/dp = log2((1 - p)/p) - k (1 - p)^(k - 1), for 0 < p < 1."""
    p = np.asarray(p, dtype=float)
    out = (np.log1p(-p) - np.log(p)) / LN2 - k * np.exp((k - 1) * np.log1p(-p))
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CriticalPoints:
    roots: tuple[float, ...]
    values: tuple[float, ...]


def _p_of(s: float) -> float:
    return 0.5 if s >= _LOG_HALF else math.exp(s)


_LOG_HALF = math.log(0.5)


def f_prime_roots(k: int, grid_points: int = 10_000, lo: float | None = None) -> list[float]:
    """Every root of f' in (lo, 1/2), increasing.

    Brackets come from sign changes on a log-spaced grid ending exactly at
    1/2; each is refined by bisection in log p so that roots near 2^-k keep
    full relative precision.  f' < 0 on [1/2, 1), so nothing is missed there.
    """
    lo = lo if lo is not None else max(10.0 ** (-2 * k), 1e-300)
    u = np.linspace(math.log(lo), _LOG_HALF, grid_points)
    u[-1] = _LOG_HALF
    p = np.exp(u)
    p[-1] = 0.5
    g = f_p_prime(p, k)
    roots = []
    for j in np.flatnonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0):
        r = optimize.bisect(lambda s: f_p_prime(_p_of(s), k), u[j], u[j + 1], xtol=1e-13, maxiter=500)
        roots.append(_p_of(r))
    return roots


def f_critical_points(k: int, k_min: int = 20, grid_points: int = 10_000) -> CriticalPoints:
    """The three roots of f' in (0, 1/2) and f at each, for k >= k_min."""
    if k < k_min:
        raise RootsNotFound(0)
    roots = f_prime_roots(k, grid_points)
    if len(roots) != 3:
        raise RootsNotFound(len(roots))
    return CriticalPoints(tuple(roots), tuple(float(f_p(r, k)) for r in roots))


def f_max(k: int, grid_points: int = 10_000) -> tuple[float, float]:
    """(max of f on [0, 1], argmax) over a uniform grid, both endpoints and the roots of f'."""
    cand = np.concatenate([np.linspace(0.0, 1.0, grid_points + 1), f_prime_roots(k, grid_points)])
    vals = f_p(cand, k)
    j = int(np.argmax(vals))
    return float(vals[j]), float(cand[j])


def alpha_d(k: int) -> float:
    return 2**k * LN2 - k


def alpha_sat_estimate(k: int, offset: float = 1.0) -> float:
    return 2**k * LN2 - offset


def ez_upper_bound_log2(n: int, k: int, m: int, alpha_sat_est: float | None = None, grid_points: int = 10_000):
    """Upper bound on log2 E[Z] for planted formulas with m >= (alpha_sat - 1) n.

    Follows the union-over-distances chain: with beta = m / (n (2^k - 1) ln 2),

        E[Z] <= sum_i C(n, i) exp(-m q_i)
             <= (n + 1) * max_p 2^(n f(p)) * 2^(n max(0, 1 - beta))

    where q_i is :func:`clause_miss_prob`.  Returns ``(log2_bound, grid_points)``.
    """
    a = alpha_sat_estimate(k) if alpha_sat_est is None else alpha_sat_est
    if m < (a - 1.0) * n:
        raise ValueError(f"need m >= (alpha_sat - 1) n = {(a - 1.0) * n:.3f}, got m={m}")
    fmax, _ = f_max(k, grid_points)
    beta = m / (n * (2**k - 1) * LN2)
    bound = math.log2(n + 1) + n * max(fmax, 0.0) + n * max(0.0, 1.0 - beta)
    return bound, grid_points


def regime_params(n: int, k: int, m: int, alpha_sat_offset: float = 1.0) -> RegimeParams:
    if m < 1:
        raise ValueError("m must be >= 1")
    ratio = m / n
    z = (math.log(ratio) - k * LN2) / k if ratio >= 2**k else None
    zp = z + math.log(k) / k if z is not None else None
    return RegimeParams(
        n=n,
        k=k,
        m=m,
        alpha_sat_est=alpha_sat_estimate(k, alpha_sat_offset),
        alpha_d=alpha_d(k),
        z=z,
        z_prime=zp,
        t=ratio ** (1.0 / k),
    )
