"""Constructed formulas in which every variable is good for a given sigma."""

import numpy as np

from ksatlab.core import Formula
from ksatlab.distributions import sample_P_sigma


def forced_chain(n, k, rng, padding=None):
    """A formula where x_i has a critical clause with i as its largest index, for every i.

    The clause for x_i has width min(i, k): earlier literals disagree with
    sigma, the x_i literal agrees.  Random sigma-satisfying k-clauses are
    added as padding and the clause order is shuffled.
    """
    sigma = rng.integers(0, 2, n).astype(np.uint8)

    def lit(v, agree):
        positive = bool(sigma[v - 1]) == agree
        return v if positive else -v

    clauses = []
    for i in range(1, n + 1):
        width = min(i, k)
        earlier = sorted(rng.choice(np.arange(1, i), size=width - 1, replace=False).tolist()) if width > 1 else []
        clauses.append(tuple(lit(v, False) for v in earlier) + (lit(i, True),))
    pad = int(rng.integers(0, 3 * n)) if padding is None else padding
    if pad:
        clauses += sample_P_sigma(n, min(k, n), pad, sigma, rng).clauses
    order = rng.permutation(len(clauses))
    return Formula.from_clauses(n, [clauses[j] for j in order]), sigma


def permute_variables(F, perm):
    """Rename variable v to perm[v - 1] (1-based)."""
    clauses = [tuple((1 if l > 0 else -1) * int(perm[abs(l) - 1]) for l in c) for c in F.clauses]
    return Formula.from_clauses(F.n, clauses, F.k)
