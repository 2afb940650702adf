"""Command line: ``python -m ksatlab {gen,solve,analyze,exp}``.

Exit codes follow the SAT-competition convention: 10 when a model is
printed, 20 when the exhaustive oracle proves unsatisfiability, 0 when a
command finishes without a certificate, 1 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import dimacs, oracle
from .analysis import good_variables, regime_params
from .core import KsatError, eval_formula
from .distributions import sample_P, sample_R, sample_R_plus
from .harness import load_config, run_experiment
from .solvers import BudgetPolicy, ppz_repeat, solve_random_ksat, uniform_sampling_solver

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_OK = 0
EXIT_ERROR = 1


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ksatlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="sample a formula and write DIMACS")
    g.add_argument("--dist", choices=("random", "planted", "rplus"), required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--max-attempts", type=int, default=1000)
    g.add_argument("--out", help="output file (default: stdout)")

    s = sub.add_parser("solve", help="search for a model of a DIMACS formula")
    how = s.add_mutually_exclusive_group()
    how.add_argument("--ppz", action="store_true", help="repeated Simple-PPZ")
    how.add_argument("--sampling", action="store_true", help="uniform random assignments")
    how.add_argument("--oracle", action="store_true", help="exhaustive search (n <= 30)")
    how.add_argument("--auto", action="store_true", help="budgeted dispatch for random k-SAT (default)")
    s.add_argument("file")
    s.add_argument("--trials", type=int, default=None)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--gamma", type=float, default=BudgetPolicy.gamma)
    s.add_argument("--poly-factor", type=float, default=BudgetPolicy.poly_factor)
    s.add_argument("--cap", type=int, default=BudgetPolicy.cap)

    a = sub.add_parser("analyze", help="good-variable report for a planted formula")
    a.add_argument("file")
    a.add_argument("--sigma", help="planted assignment as signed literals, overrides the file comment")

    e = sub.add_parser("exp", help="run an experiment config and write CSV")
    e.add_argument("config")
    e.add_argument("--out", help="CSV path (default: the config's output key)")
    return p


def _model_lines(a: np.ndarray) -> str:
    lits = [str(i + 1 if b else -(i + 1)) for i, b in enumerate(a)]
    return "s SATISFIABLE\nv " + " ".join(lits) + " 0\n"


def _cmd_gen(args, out) -> int:
    rng = np.random.default_rng(args.seed)
    sigma = None
    if args.dist == "random":
        F = sample_R(args.n, args.k, args.m, rng)
    elif args.dist == "planted":
        inst = sample_P(args.n, args.k, args.m, rng)
        F, sigma = inst.formula, inst.sigma
    else:
        F = sample_R_plus(args.n, args.k, args.m, rng, max_attempts=args.max_attempts, method="auto")
    text = dimacs.dimacs_write(F, sigma)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def _cmd_solve(args, out) -> int:
    F, _ = dimacs.read_file(args.file)
    rng = np.random.default_rng(args.seed)
    if args.oracle:
        a = oracle.brute_force_sat(F)
        if a is None:
            out.write("s UNSATISFIABLE\n")
            return EXIT_UNSAT
    else:
        if args.ppz or args.sampling:
            trials = args.trials or 1 << min(F.n, 20)
            solver = ppz_repeat if args.ppz else uniform_sampling_solver
            res = solver(F, trials, rng)
        else:
            if F.k is None:
                raise KsatError("--auto needs a fixed-width formula")
            policy = BudgetPolicy(args.gamma, args.poly_factor, args.cap)
            res = solve_random_ksat(F, F.n, F.k, F.m, policy, rng)
        out.write(f"c trials {res.trials_used}\n")
        if not res.found:
            out.write("s UNKNOWN\n")
            return EXIT_OK
        a = res.assignment
    # re-parse the input and check the certificate against it
    F2, _ = dimacs.read_file(args.file)
    if not eval_formula(F2, a):
        raise KsatError("internal error: certificate does not verify")
    out.write(_model_lines(a))
    return EXIT_SAT


def _parse_sigma(text: str, n: int) -> np.ndarray:
    lits = [int(t) for t in text.replace(",", " ").split()]
    if sorted(abs(l) for l in lits) != list(range(1, n + 1)):
        raise KsatError("--sigma must list every variable once")
    sigma = np.zeros(n, dtype=np.uint8)
    for l in lits:
        sigma[abs(l) - 1] = 1 if l > 0 else 0
    return sigma


def _cmd_analyze(args, out) -> int:
    F, sigma = dimacs.read_file(args.file)
    if args.sigma:
        sigma = _parse_sigma(args.sigma, F.n)
    if sigma is None:
        raise KsatError("no planted assignment: add a 'c planted' line or pass --sigma")
    rep = good_variables(F, sigma)
    report = {
        "n": F.n,
        "m": F.m,
        "k": F.k,
        "sigma_satisfies": eval_formula(F, sigma),
        "good_count": rep.good_count,
        "good_fraction": rep.good_count / F.n if F.n else 0.0,
        "ppz_success_lower_bound_log2": -(F.n - rep.good_count),
        "good_variables": sorted(rep.good_set),
        "witness_clause": {str(v): c for v, c in sorted(rep.witness.items())},
    }
    if F.k and F.m:
        rp = regime_params(F.n, F.k, F.m)
        report["regime"] = {"ratio": F.m / F.n, "alpha_d": rp.alpha_d, "z": rp.z, "z_prime": rp.z_prime, "t": rp.t}
    out.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def _cmd_exp(args, out) -> int:
    cfg = load_config(args.config)
    records = run_experiment(cfg, args.out)
    errors = sum(1 for r in records if r.error)
    out.write(f"c {len(records)} rows, {errors} error rows\n")
    return EXIT_OK


def cli_main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        err.write(parser.format_usage())
        err.write(f"{exc}\n")
        return EXIT_ERROR
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    handler = {"gen": _cmd_gen, "solve": _cmd_solve, "analyze": _cmd_analyze, "exp": _cmd_exp}[args.command]
    try:
        return handler(args, out)
    except (OSError, KsatError, ValueError) as exc:
        err.write(f"ksatlab {args.command}: {exc}\n")
        return EXIT_ERROR
