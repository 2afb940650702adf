import itertools
import math
from collections import defaultdict
from fractions import Fraction

import numpy as np
import pytest

from ksatlab import _kernels
from ksatlab.core import Formula
from ksatlab.distributions import planted_from_draws


def _variable_set_draws(n, k):
    """Every equally likely index tuple fed to the partial Fisher-Yates kernel, mapped to its sorted set."""
    for draw in itertools.product(*[range(j, n) for j in range(k)]):
        arr = np.array([draw], dtype=np.int32)
        out = np.empty((1, k), dtype=np.int32)
        _kernels.partial_fisher_yates(arr, out)
        yield tuple(sorted(int(v) + 1 for v in out[0]))


def exact_planted_law(n, k, m):
    """Law of sample_P(n, k, m) computed by enumerating its draw space.

    sigma is uniform on 2^n values, each clause's index tuple is uniform on
    n (n-1) ... (n-k+1) values and its agreement pattern on 2^k - 1 non-zero
    patterns.  Each full tuple is pushed through the sampler's own builders.
    Returns {formula: Fraction}.
    """
    sets = list(_variable_set_draws(n, k))
    patterns = [p for p in range(1, 1 << k)]
    per_clause = len(sets) * len(patterns)
    weight = Fraction(1, (1 << n) * per_clause**m)
    law = defaultdict(Fraction)
    for s in range(1 << n):
        sigma = ((s >> np.arange(n)) & 1).astype(np.uint8)
        for choice in itertools.product(itertools.product(sets, patterns), repeat=m):
            var_sets = np.array([c[0] for c in choice], dtype=np.int32).reshape(m, k)
            agree = np.array([[(p >> j) & 1 for j in range(k)] for _, p in choice], dtype=bool).reshape(m, k)
            F = planted_from_draws(n, k, sigma, var_sets, agree)
            law[F] += weight
    return dict(law)


@pytest.fixture(scope="session")
def planted_law():
    cache = {}

    def get(n, k, m):
        if (n, k, m) not in cache:
            cache[(n, k, m)] = exact_planted_law(n, k, m)
        return cache[(n, k, m)]

    return get


def chi_square_pvalue(counts, probs):
    from scipy import stats

    counts = np.asarray(counts, dtype=float)
    expected = np.asarray(probs, dtype=float) * counts.sum()
    return stats.chisquare(counts, expected).pvalue


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None):
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number].line())
