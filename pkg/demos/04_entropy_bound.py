"""
The entropy function behind the model-count bound
=================================================

f(p) = H(p) - 1 + (1 - p)^k.  Its maximum over p controls how many
assignments at relative distance p from sigma can survive.  For large k,
f' has three roots: one near 2^-k, one near ln k / k and one just below 1/2.
"""
import math

import numpy as np

from ksatlab.analysis import ez_upper_bound_log2, f_critical_points, f_max, f_p
from ksatlab import count_solutions, sample_P

for k in (20, 50, 100):
    cp = f_critical_points(k)
    r1, r2, r3 = cp.roots
    print(f"k={k:3d}  roots {r1:.3e} {r2:.5f} {r3:.12f}   max f * 2^k = {f_max(k)[0] * 2 ** k:.3f}")

print("\nf(p, 10) on a grid:", np.round(f_p(np.linspace(0, 1, 6), 10), 4))

# A finite-n bound on log2 E[Z] for planted formulas, compared with sampling.
rng = np.random.default_rng(4)
n, k, m = 12, 3, 120
bound, grid = ez_upper_bound_log2(n, k, m)
mean = np.mean([count_solutions(sample_P(n, k, m, rng).formula).solutions for _ in range(500)])
print(f"\n(n,k,m)=({n},{k},{m}): bound {bound:.3f} bits, sampled log2 mean {math.log2(mean):.3f}  (grid {grid})")
