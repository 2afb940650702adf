"""
Good variables at half the threshold density
============================================

With m = n 2^(k-1) ln 2 clauses the share of good variables shrinks
like ln k / k.  The exact expectation is a sum over variable indices;
sampling agrees with it closely.
"""
import math

import numpy as np

from ksatlab import good_variables, sample_P
from ksatlab.analysis import expected_good_count

n = 5_000
rng = np.random.default_rng(3)
print(" k   measured   exact mean   g k / ln k")
for k in range(3, 10):
    m = math.ceil(n * 2 ** (k - 1) * math.log(2))
    fr = [good_variables(inst.formula, inst.sigma).good_count / n
          for inst in (sample_P(n, k, m, rng) for _ in range(5))]
    g = np.mean(fr)
    print(f"{k:2d}   {g:.4f}     {expected_good_count(n, k, m) / n:.4f}       {g * k / math.log(k):.3f}")

# The last column stays roughly flat: the fraction really is of order ln k / k.
# A tiny example with the witness clause per good variable:
from ksatlab.core import Formula

F = Formula.from_clauses(3, [(1,), (-1, 2), (1, -2, 3)])
rep = good_variables(F, [1, 1, 0])
print("\ngood set", sorted(rep.good_set), "witnesses", rep.witness)
