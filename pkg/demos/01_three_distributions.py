"""
Random, planted and satisfiable-conditioned formulas
=====================================================

Draw one formula from each distribution and compare model counts.
"""
import math

import numpy as np

from ksatlab import count_solutions, exact_planted_prob, enumerate_all_formulas, sample_P, sample_R, sample_R_plus
from ksatlab.analysis import expected_solutions_log2

rng = np.random.default_rng(1)
n, k = 14, 3

# Uniform random formulas: every clause is one of C(n, k) 2^k, independently.
# Past about 4.27 clauses per variable they are almost never satisfiable.
for ratio in (2, 4, 6):
    m = math.ceil(ratio * n)
    counts = [count_solutions(sample_R(n, k, m, rng)).solutions for _ in range(300)]
    print(f"R({n},{k},{m}): mean count {np.mean(counts):8.2f}  "
          f"closed form {2 ** expected_solutions_log2(n, k, m):8.2f}  "
          f"share satisfiable {np.mean(np.array(counts) > 0):.2f}")

# Planted formulas only use clauses a hidden sigma satisfies, so sigma is
# always a model.  The draw is tilted towards formulas with many models:
# a formula's probability is its model count times a fixed weight.
inst = sample_P(n, k, 6 * n, rng)
print("\nplanted, 6n clauses: models =", count_solutions(inst.formula).solutions)

for F, _ in list(enumerate_all_formulas(2, 1, 2))[:6]:
    print(f"  {F.clauses}: P = {exact_planted_prob(F, 2, 1, 2)}  (models {count_solutions(F).solutions})")

# Conditioning the random model on satisfiability.  Above the threshold
# plain rejection rarely succeeds; reweighting planted draws by 1/Z is exact
# and much faster there.
for method in ("rejection", "planted"):
    F = sample_R_plus(n, k, 6 * n, rng, method=method, max_attempts=100_000)
    print(f"R+ via {method:9s}: models = {count_solutions(F).solutions}")
