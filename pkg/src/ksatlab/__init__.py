"""Random and planted k-SAT: samplers, Simple-PPZ, good-variable analysis and exact oracles."""

__version__ = "0.1.0"

from .core import (
    AttemptsExhausted,
    CapExceeded,
    ClauseStatus,
    Formula,
    KsatError,
    PartialAssignment,
    RootsNotFound,
    Status,
    clause_status,
    eval_formula,
    validate_formula,
)
from .distributions import (
    PlantedInstance,
    RandomStream,
    sample_P,
    sample_P_sigma,
    sample_R,
    sample_R_plus,
    sample_satisfying_clause,
    sample_uniform_clause,
)
from .oracle import brute_force_sat, count_solutions, enumerate_all_formulas, exact_planted_prob
from .solvers import (
    BudgetPolicy,
    SolveOutcome,
    planted_trial_budget,
    ppz_repeat,
    simple_ppz_run,
    solve_random_ksat,
    uniform_sampling_solver,
)
from .analysis import good_variables, regime_params
