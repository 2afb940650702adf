"""
Solving satisfiable random 3-SAT with a budget
==============================================

Sparse formulas have many models, so guessing uniform assignments works.
Dense ones behave like planted formulas, where repeated PPZ passes work.
The solver chooses a branch by clause density and sizes its trial budget.
"""
import math

import numpy as np

from ksatlab import BudgetPolicy, eval_formula, sample_R_plus, solve_random_ksat
from ksatlab.solvers import choose_branch, planted_budget_log2, sampling_budget_log2

rng = np.random.default_rng(5)
n, k = 14, 3
policy = BudgetPolicy()

print("ratio  branch     log2 budget   solved   mean trials")
for ratio in (2, 4, 4.2, 6, 10):
    m = math.ceil(ratio * n)
    solved, trials = 0, []
    for _ in range(40):
        F = sample_R_plus(n, k, m, rng, method="auto", max_attempts=100_000)
        out = solve_random_ksat(F, n, k, m, policy, rng)
        solved += out.found and eval_formula(F, out.assignment)
        trials.append(out.trials_used)
    branch = choose_branch(n, k, m, policy)
    budget = (sampling_budget_log2 if branch == "sampling" else planted_budget_log2)(n, k, m, policy)
    print(f"{ratio:5}  {branch:9s}  {budget:11.2f}   {solved}/40    {np.mean(trials):8.1f}")
