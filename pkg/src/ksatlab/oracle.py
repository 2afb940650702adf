"""Exhaustive ground truth for small instances.

Assignments are enumerated as integers ``0 .. 2^n - 1`` in increasing order,
bit ``v - 1`` holding variable ``v``; the first model found is therefore the
lexicographically smallest when read from ``x_n`` down to ``x_1``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from . import _kernels
from .core import CapExceeded, Formula, check_formula

MAX_VARS = 30
MAX_TUPLES = 10**7


@dataclass(frozen=True)
class ExactCount:
    solutions: int
    n_enumerated: int


def _guard(F: Formula, cap: int = MAX_VARS) -> None:
    if F.n > cap:
        raise CapExceeded(f"exhaustive oracle is capped at n <= {cap}, got n={F.n}")


def int_to_assignment(a: int, n: int) -> np.ndarray:
    return ((int(a) >> np.arange(n)) & 1).astype(np.uint8)


def assignment_to_int(a) -> int:
    a = np.asarray(a, dtype=np.int64)
    return int((a << np.arange(a.size, dtype=np.int64)).sum())


def brute_force_sat(F: Formula) -> np.ndarray | None:
    """First satisfying assignment in enumeration order, or ``None`` if unsatisfiable."""
    _guard(F)
    pos, neg = F.masks
    a = _kernels.first_model(pos, neg, F.n)
    return None if a < 0 else int_to_assignment(a, F.n)


def is_satisfiable(F: Formula) -> bool:
    return brute_force_sat(F) is not None


def count_solutions(F: Formula) -> ExactCount:
    _guard(F)
    pos, neg = F.masks
    return ExactCount(int(_kernels.count_models(pos, neg, F.n)), 1 << F.n)


def all_clauses(n: int, k: int) -> list[tuple[int, ...]]:
    """All C(n, k) * 2^k width-k clauses in lexicographic order (variable set, then signs)."""
    out = []
    for vars_ in itertools.combinations(range(1, n + 1), k):
        for signs in itertools.product((1, -1), repeat=k):
            out.append(tuple(s * v for s, v in zip(signs, vars_)))
    return out


def enumerate_all_formulas(n: int, k: int, m: int, ordered: bool = True) -> Iterator[tuple[Formula, int]]:
    """Every formula of m width-k clauses with its multiplicity.

    With ``ordered=True`` each ordered m-tuple is yielded once (multiplicity 1).
    With ``ordered=False`` each multiset is yielded once together with the
    number of orderings it stands for; the multiplicities sum to
    ``(C(n, k) * 2^k)^m`` either way.
    """
    clauses = all_clauses(n, k)
    if len(clauses) ** m > MAX_TUPLES:
        raise CapExceeded(f"{len(clauses)}^{m} formulas exceeds the enumeration cap {MAX_TUPLES}")
    if ordered:
        for combo in itertools.product(clauses, repeat=m):
            yield Formula.from_clauses(n, combo, k), 1
        return
    for combo in itertools.combinations_with_replacement(clauses, m):
        mult = math.factorial(m)
        for c in Counter(combo).values():
            mult //= math.factorial(c)
        yield Formula.from_clauses(n, combo, k), mult


def planted_base_probability(n: int, k: int, m: int) -> Fraction:
    """The per-solution weight 2^-n * (C(n, k) * (2^k - 1))^-m."""
    return Fraction(1, (1 << n) * (math.comb(n, k) * ((1 << k) - 1)) ** m)


def exact_planted_prob(F: Formula, n: int, k: int, m: int) -> Fraction:
    """Exact probability that ``sample_P(n, k, m)`` outputs the clause sequence ``F``."""
    _guard(F, 20)
    if F.n != n or F.m != m:
        raise ValueError("formula does not match (n, m)")
    check_formula(F)
    return count_solutions(F).solutions * planted_base_probability(n, k, m)
