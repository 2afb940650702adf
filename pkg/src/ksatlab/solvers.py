"""Simple-PPZ, uniform sampling, and the budgeted dispatch between them.

A PPZ pass needs one fair coin per variable at most.  Coins are drawn up
front as ``rng.random(n) < 0.5`` (one double per variable, used or not), so
trial ``t`` of :func:`ppz_repeat` consumes exactly the same stream slice as
the ``t``-th call to :func:`simple_ppz_run` on the same generator.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .analysis import LN2, alpha_d, expected_solutions_log2, regime_params
from .core import CapExceeded, Formula, PartialAssignment, Status, check_formula, clause_status, eval_formula
from .distributions import as_rng

TRIAL_CHUNK = 1 << 15


@dataclass(frozen=True)
class BudgetPolicy:
    """Trial-count knobs that the asymptotic statements leave open.

    gamma:        good-variable fraction constant in gamma * ln k / k and gamma * z'
    poly_factor:  trials are multiplied by n ** poly_factor
    cap:          hard ceiling on any single trial budget
    sampling_c:   exponent constant in the 2^(c n k / 2^k) concentration slack
    """

    gamma: float = 0.1
    poly_factor: float = 1.0
    cap: int = 1 << 40
    sampling_c: float = 1.0

    def __post_init__(self):
        for name in ("gamma", "poly_factor", "cap", "sampling_c"):
            if not getattr(self, name) > 0:
                raise ValueError(f"BudgetPolicy.{name} must be positive")


@dataclass(frozen=True, eq=False)
class SolveOutcome:
    assignment: Optional[np.ndarray]
    trials_used: int
    elapsed: float
    branch: str = ""

    @property
    def found(self) -> bool:
        return self.assignment is not None


def _coins(rng: np.random.Generator, trials: int, n: int) -> np.ndarray:
    return (rng.random((trials, n)) < 0.5).astype(np.int8)


def ppz_pass(F: Formula, coins: np.ndarray, abort: bool = True) -> np.ndarray | None:
    """One Simple-PPZ pass with the guesses fixed in advance.

    Readable reference for the compiled kernel: scan for the first unit
    clause and satisfy it; otherwise guess ``x_i`` if unset and move on.
    """
    n = F.n
    clauses = F.clauses
    pa = PartialAssignment(n)
    i = 1
    while i <= n:
        unit = None
        for c in clauses:
            st = clause_status(c, pa)
            if st.status is Status.FALSIFIED and abort:
                return None
            if st.status is Status.UNIT:
                unit = st.literal
                break
        if unit is not None:
            pa.set(abs(unit), unit > 0)
        elif not pa.is_set(i):
            pa.set(i, bool(coins[i - 1]))
            i += 1
        else:
            i += 1
    a = pa.to_assignment()
    return a if eval_formula(F, a) else None


def _run_trials(F: Formula, coins: np.ndarray, *, abort=True, stop_first=False, target=None):
    ptr, owner, lit = F.occurrences
    tgt = np.asarray(target, dtype=np.int8) if target is not None else np.zeros(0, np.int8)
    out = np.zeros(F.n, np.int8)
    s, h, first = _kernels.ppz_trials(F.lits, ptr, owner, lit, F.n, coins, abort, stop_first, tgt, out)
    return int(s), int(h), int(first), out.astype(np.uint8)


def simple_ppz_run(F: Formula, rng, abort: bool = True) -> np.ndarray | None:
    """One Simple-PPZ pass; returns a satisfying assignment or ``None``."""
    check_formula(F)
    coins = _coins(as_rng(rng), 1, F.n)
    s, _, _, out = _run_trials(F, coins, abort=abort, stop_first=True)
    return out if s else None


def ppz_success_counts(F: Formula, trials: int, rng, target=None, abort: bool = True) -> tuple[int, int]:
    """(successful passes, passes returning ``target``) over ``trials`` independent passes."""
    check_formula(F)
    rng = as_rng(rng)
    succ = hits = 0
    for start in range(0, trials, TRIAL_CHUNK):
        coins = _coins(rng, min(TRIAL_CHUNK, trials - start), F.n)
        s, h, _, _ = _run_trials(F, coins, abort=abort, target=target)
        succ += s
        hits += h
    return succ, hits


def ppz_repeat(F: Formula, trials: int, rng) -> SolveOutcome:
    """Up to ``trials`` Simple-PPZ passes; the lowest-index success wins."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    check_formula(F)
    rng = as_rng(rng)
    t0 = time.perf_counter()
    for start in range(0, trials, TRIAL_CHUNK):
        coins = _coins(rng, min(TRIAL_CHUNK, trials - start), F.n)
        s, _, first, out = _run_trials(F, coins, stop_first=True)
        if s:
            if not eval_formula(F, out):
                raise AssertionError("PPZ kernel returned a non-model")
            return SolveOutcome(out, start + first + 1, time.perf_counter() - t0, "ppz")
    return SolveOutcome(None, trials, time.perf_counter() - t0, "ppz")


def uniform_sampling_solver(F: Formula, trials: int, rng) -> SolveOutcome:
    """Test ``trials`` i.i.d. uniform assignments; the first model wins."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = as_rng(rng)
    t0 = time.perf_counter()
    n = F.n
    small = n <= 62
    if small:
        pos, neg = F.masks
    for start in range(0, trials, TRIAL_CHUNK):
        cnt = min(TRIAL_CHUNK, trials - start)
        rows = rng.integers(0, 2, size=(cnt, n), dtype=np.uint8)
        if small:
            enc = (rows.astype(np.int64) << np.arange(n, dtype=np.int64)).sum(axis=1)
            hit = int(_kernels.hits_in_rows(pos, neg, enc))
        else:
            hit = next((t for t in range(cnt) if eval_formula(F, rows[t])), -1)
        if hit >= 0:
            return SolveOutcome(rows[hit].copy(), start + hit + 1, time.perf_counter() - t0, "sampling")
    return SolveOutcome(None, trials, time.perf_counter() - t0, "sampling")


def predicted_good_fraction(n: int, k: int, m: int, policy: BudgetPolicy = BudgetPolicy()) -> float:
    """Best available lower estimate of the good-variable fraction at (n, k, m).

    max of gamma ln k / k, gamma z' (once m/n >= 2^k) and (1 - 2/t)(1 - 2/k)
    (once t = (m/n)^(1/k) > 2).
    """
    rp = regime_params(n, k, m)
    g = policy.gamma * math.log(k) / k if k > 1 else 0.0
    if rp.z_prime is not None:
        g = max(g, policy.gamma * rp.z_prime)
    if rp.t > 2:
        g = max(g, (1 - 2 / rp.t) * (1 - 2 / k))
    return min(g, 1.0)


def planted_budget_log2(n: int, k: int, m: int, policy: BudgetPolicy = BudgetPolicy()) -> float:
    g = predicted_good_fraction(n, k, m, policy)
    return policy.poly_factor * math.log2(n) + n * (1 - g)


def planted_trial_budget(n: int, k: int, m: int, policy: BudgetPolicy = BudgetPolicy()) -> int:
    """ceil(n^poly * 2^(n (1 - g))), capped at ``policy.cap``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    lb = planted_budget_log2(n, k, m, policy)
    if lb >= math.log2(policy.cap):
        return policy.cap
    return max(1, math.ceil(2.0**lb))


def sampling_budget_log2(n: int, k: int, m: int, policy: BudgetPolicy = BudgetPolicy()) -> float:
    """log2 of n^poly * 2^n * 2^(c n k / 2^k) / E[Z]."""
    slack = policy.sampling_c * n * k / 2**k
    return policy.poly_factor * math.log2(n) + n + slack - expected_solutions_log2(n, k, m)


def dispatch_threshold(n: int, k: int, m: int, policy: BudgetPolicy = BudgetPolicy()) -> float:
    """Clause count below which uniform sampling is used: alpha_d n (1 - f/2)."""
    f = predicted_good_fraction(n, k, max(m, 1), policy)
    return alpha_d(k) * n * (1 - f / 2)


def choose_branch(n: int, k: int, m: int, policy: BudgetPolicy = BudgetPolicy()) -> str:
    return "sampling" if m < dispatch_threshold(n, k, m, policy) else "ppz"


def solve_random_ksat(F: Formula, n: int, k: int, m: int, policy: BudgetPolicy = BudgetPolicy(), rng=None) -> SolveOutcome:
    """Search for a model of a (conditioned) random k-SAT formula.

    Below the dispatch threshold uniform sampling is used with a budget
    scaled by the expected model count; at or above it PPZ is repeated with
    :func:`planted_trial_budget` trials.  Raises :class:`CapExceeded` when the
    chosen budget is above ``policy.cap``.
    """
    if (F.n, F.m) != (n, m) or (F.k is not None and F.k != k):
        raise ValueError("formula does not match the stated (n, k, m)")
    rng = as_rng(rng)
    branch = choose_branch(n, k, m, policy)
    if branch == "sampling":
        lb = sampling_budget_log2(n, k, m, policy)
    else:
        lb = planted_budget_log2(n, k, m, policy)
    if lb > math.log2(policy.cap):
        raise CapExceeded(f"{branch} budget 2^{lb:.1f} exceeds cap 2^{math.log2(policy.cap):.1f}")
    trials = max(1, math.ceil(2.0**lb))
    if branch == "sampling":
        out = uniform_sampling_solver(F, trials, rng)
    else:
        out = ppz_repeat(F, trials, rng)
    if out.found and not eval_formula(F, out.assignment):
        raise AssertionError("solver returned a non-model")
    return out
