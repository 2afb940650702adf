"""Samplers for random, planted and satisfiable-conditioned k-SAT.

Every sampler takes a ``numpy.random.Generator`` (or anything
:func:`as_rng` accepts).  Draw order is fixed so seeded output is stable:

1. variable sets, in chunks of ``CHUNK`` clauses; within a chunk column
   ``j`` is one ``integers(j, n)`` call (partial Fisher-Yates indices);
2. then literal signs for the whole formula (``sample_R``) or
   sigma-agreement patterns (planted samplers).

``sample_P`` draws sigma before anything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .core import AttemptsExhausted, Clause, Formula, as_assignment, eval_formula

CHUNK = 1 << 16


@dataclass(frozen=True)
class RandomStream:
    """A reproducible random stream: a master seed plus a derivation path.

    Streams with different labels under one seed are independent (numpy's
    ``SeedSequence`` spawn keys); equal ``(seed, label)`` pairs replay the
    same sequence.
    """

    seed: int
    label: tuple[int, ...] = field(default=())

    def child(self, *labels: int) -> "RandomStream":
        return RandomStream(self.seed, self.label + tuple(int(l) for l in labels))

    def seed_sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.seed, spawn_key=self.label)

    def generator(self) -> np.random.Generator:
        return np.random.default_rng(self.seed_sequence())

    def derive_seed(self) -> int:
        """A 63-bit integer seed standing for this stream (handy for CSV rows and the CLI)."""
        return int(self.seed_sequence().generate_state(1, np.uint64)[0] >> np.uint64(1))


def as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RandomStream):
        return rng.generator()
    return np.random.default_rng(rng)


@dataclass(frozen=True, eq=False)
class PlantedInstance:
    formula: Formula
    sigma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "sigma", as_assignment(self.sigma, self.formula.n))


def _check_params(n: int, k: int, m: int) -> None:
    if k < 1:
        raise ValueError(f"clause width must be >= 1, got k={k}")
    if k > n:
        raise ValueError(f"need k <= n, got k={k}, n={n}")
    if m < 0:
        raise ValueError(f"need m >= 0, got m={m}")
    if k > 62:
        raise ValueError("clause width above 62 is not supported")


def draw_variable_sets(n: int, k: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """``(m, k)`` array of sorted 1-based variable sets, each uniform among C(n, k)."""
    out = np.empty((m, k), dtype=np.int32)
    draws = np.empty((min(CHUNK, m), k), dtype=np.int32)
    for start in range(0, m, CHUNK):
        cm = min(CHUNK, m - start)
        for j in range(k):
            draws[:cm, j] = rng.integers(j, n, size=cm, dtype=np.int32)
        _kernels.partial_fisher_yates(draws[:cm], out[start : start + cm])
    out.sort(axis=1)
    out += 1
    return out


def draw_agreement(k: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """``(m, k)`` bool array; row ``c`` is uniform over the 2^k - 1 non-zero patterns.

    A pattern is drawn uniformly from all 2^k and the all-False one is redrawn.
    """
    pat = rng.integers(0, 1 << k, size=m, dtype=np.int64)
    zero = np.flatnonzero(pat == 0)
    while zero.size:
        pat[zero] = rng.integers(0, 1 << k, size=zero.size, dtype=np.int64)
        zero = zero[pat[zero] == 0]
    return ((pat[:, None] >> np.arange(k, dtype=np.int64)) & 1).astype(bool)


def formula_from_draws(n: int, k: int, var_sets: np.ndarray, positive: np.ndarray) -> Formula:
    ones = np.ones(n, dtype=bool)
    lits = _kernels.signed_literals(np.asarray(var_sets, np.int32).reshape(-1, k), ones, np.asarray(positive, bool).reshape(-1, k))
    return Formula(n, lits, k)


def planted_from_draws(n: int, k: int, sigma: np.ndarray, var_sets: np.ndarray, agree: np.ndarray) -> Formula:
    """Literal ``j`` of clause ``c`` agrees with sigma exactly when ``agree[c, j]``."""
    sigma = np.asarray(sigma, dtype=bool)
    lits = _kernels.signed_literals(np.asarray(var_sets, np.int32).reshape(-1, k), sigma, np.asarray(agree, bool).reshape(-1, k))
    return Formula(n, lits, k)


def sample_R(n: int, k: int, m: int, rng) -> Formula:
    """m i.i.d. clauses, each uniform over the C(n, k) * 2^k distinct-variable clauses."""
    _check_params(n, k, m)
    rng = as_rng(rng)
    var_sets = draw_variable_sets(n, k, m, rng)
    positive = rng.integers(0, 2, size=(m, k), dtype=np.int8).astype(bool)
    return formula_from_draws(n, k, var_sets, positive)


def sample_P_sigma(n: int, k: int, m: int, sigma, rng) -> Formula:
    """m i.i.d. clauses, each uniform over the C(n, k) * (2^k - 1) clauses sigma satisfies."""
    _check_params(n, k, m)
    sigma = as_assignment(sigma, n)
    rng = as_rng(rng)
    var_sets = draw_variable_sets(n, k, m, rng)
    agree = draw_agreement(k, m, rng)
    return planted_from_draws(n, k, sigma, var_sets, agree)


def sample_P(n: int, k: int, m: int, rng) -> PlantedInstance:
    """Uniform sigma, then a formula from ``sample_P_sigma``."""
    _check_params(n, k, m)
    rng = as_rng(rng)
    sigma = rng.integers(0, 2, size=n, dtype=np.uint8)
    return PlantedInstance(sample_P_sigma(n, k, m, sigma, rng), sigma)


def sample_uniform_clause(n: int, k: int, rng) -> Clause:
    return sample_R(n, k, 1, rng).clauses[0]


def sample_satisfying_clause(n: int, k: int, sigma, rng) -> Clause:
    return sample_P_sigma(n, k, 1, sigma, rng).clauses[0]


def sample_R_plus(
    n: int,
    k: int,
    m: int,
    rng,
    oracle: Callable[[Formula], bool] | None = None,
    max_attempts: int = 1000,
    method: str = "rejection",
) -> Formula:
    """Draw from R(n, k, m) conditioned on satisfiability.

    ``method="rejection"`` redraws from ``sample_R`` until ``oracle`` certifies
    the formula satisfiable.  ``method="planted"`` draws a planted formula and
    keeps it with probability 1/Z(F); since a planted draw has probability
    proportional to Z(F), the kept formulas are uniform over satisfiable
    clause sequences, i.e. exactly R+.  It accepts with probability
    P(sat)/E[Z], so it is the practical choice when E[Z] < 1.  ``"auto"``
    picks between the two on that criterion.

    Raises :class:`AttemptsExhausted` after ``max_attempts`` rejected draws.
    """
    from . import oracle as _oracle

    _check_params(n, k, m)
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    rng = as_rng(rng)
    if method == "auto":
        method = "rejection" if n + m * math.log2(1 - 2.0**-k) >= 0 else "planted"
    if method == "rejection":
        check = oracle or _oracle.is_satisfiable
        for _ in range(max_attempts):
            F = sample_R(n, k, m, rng)
            if check(F):
                return F
    elif method == "planted":
        for _ in range(max_attempts):
            inst = sample_P(n, k, m, rng)
            z = _oracle.count_solutions(inst.formula).solutions
            if rng.random() * z < 1.0:
                return inst.formula
    else:
        raise ValueError(f"unknown method {method!r}")
    raise AttemptsExhausted(
        f"no satisfiable draw of R({n}, {k}, {m}) in {max_attempts} attempts ({method})"
    )


def is_planted_consistent(inst: PlantedInstance) -> bool:
    return eval_formula(inst.formula, inst.sigma)
