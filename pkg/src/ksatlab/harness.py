"""Scripted experiments, their config files and CSV output.

Config files are flat ``key = value`` text, ``#`` starts a comment, lists
are comma separated::

    schema = 1
    experiment = good_fraction
    seed = 7
    n = 10000
    k = 4, 5, 6
    half_threshold = true
    instances = 50

Clause counts per ``(n, k)`` come from any mix of ``m`` (absolute),
``ratio`` (m = ceil(ratio n)), ``t`` (m = ceil(t^k n)), ``z``
(m = ceil(n 2^k e^(z k))) and ``half_threshold`` (m = ceil(n 2^(k-1) ln 2)).

Every (point, instance) pair gets its own seed derived from the master
seed, so rows do not depend on worker count or scheduling.
"""

from __future__ import annotations

import csv
import io
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__
from .analysis import expected_good_count, expected_solutions_log2, ez_upper_bound_log2, good_count
from .core import KsatError, eval_formula
from .distributions import RandomStream, sample_P, sample_R, sample_R_plus
from .oracle import count_solutions
from .solvers import BudgetPolicy, choose_branch, ppz_success_counts, predicted_good_fraction, solve_random_ksat

SCHEMA_VERSION = 1
EXPERIMENTS = ("good_fraction", "ppz_success", "counting", "end_to_end")
WORKERS_ENV = "KSATLAB_WORKERS"

CSV_COLUMNS = ("experiment", "n", "k", "m", "instance", "seed", "quantity", "value", "trials_used", "elapsed_ms", "error")


class ConfigError(KsatError):
    pass


@dataclass
class ExperimentConfig:
    experiment: str
    n: list[int]
    k: list[int]
    seed: int = 0
    m: list[int] = field(default_factory=list)
    ratio: list[float] = field(default_factory=list)
    t: list[float] = field(default_factory=list)
    z: list[float] = field(default_factory=list)
    half_threshold: bool = False
    instances: int = 1
    trials: int = 1
    dist: str = "random"
    max_attempts: int = 1000
    gamma: float = BudgetPolicy.gamma
    poly_factor: float = BudgetPolicy.poly_factor
    cap: int = BudgetPolicy.cap
    sampling_c: float = BudgetPolicy.sampling_c
    timing: bool = True
    workers: int = 1
    output: str = ""
    schema: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.schema != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema {self.schema}, this build reads schema {SCHEMA_VERSION}")
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
        if not self.n or not self.k:
            raise ConfigError("n and k grids must be non-empty")
        if not (self.m or self.ratio or self.t or self.z or self.half_threshold):
            raise ConfigError("no clause-count rule given (m, ratio, t, z or half_threshold)")
        if self.instances < 1 or self.trials < 1:
            raise ConfigError("instances and trials must be >= 1")
        if self.dist not in ("random", "planted"):
            raise ConfigError("dist must be 'random' or 'planted'")

    @property
    def policy(self) -> BudgetPolicy:
        return BudgetPolicy(self.gamma, self.poly_factor, self.cap, self.sampling_c)

    def points(self) -> list[tuple[int, int, int]]:
        out = []
        for n in self.n:
            for k in self.k:
                ms = list(self.m)
                ms += [math.ceil(r * n) for r in self.ratio]
                ms += [math.ceil(t**k * n) for t in self.t]
                ms += [math.ceil(n * 2**k * math.exp(z * k)) for z in self.z]
                if self.half_threshold:
                    ms.append(math.ceil(n * 2 ** (k - 1) * math.log(2)))
                out.extend((n, k, m) for m in ms)
        return out


_LIST_FIELDS = {"n": int, "k": int, "m": int, "ratio": float, "t": float, "z": float}
_SCALAR_TYPES = {
    "experiment": str, "seed": int, "half_threshold": bool, "instances": int, "trials": int,
    "dist": str, "max_attempts": int, "gamma": float, "poly_factor": float, "cap": int,
    "sampling_c": float, "timing": bool, "workers": int, "output": str, "schema": int,
}


def _parse_scalar(key: str, raw: str, typ):
    try:
        if typ is bool:
            low = raw.lower()
            if low not in ("true", "false"):
                raise ValueError
            return low == "true"
        return typ(raw)
    except ValueError:
        raise ConfigError(f"{key}: cannot read {raw!r} as {typ.__name__}") from None


def parse_config(text: str) -> ExperimentConfig:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if key in _LIST_FIELDS:
            typ = _LIST_FIELDS[key]
            values[key] = [_parse_scalar(key, v.strip(), typ) for v in val.split(",") if v.strip()]
        elif key in _SCALAR_TYPES:
            values[key] = _parse_scalar(key, val, _SCALAR_TYPES[key])
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    for required in ("experiment", "n", "k"):
        if required not in values:
            raise ConfigError(f"missing required key {required!r}")
    return ExperimentConfig(**values)


def dump_config(cfg: ExperimentConfig) -> str:
    lines = []
    for f in fields(ExperimentConfig):
        v = getattr(cfg, f.name)
        if f.name in _LIST_FIELDS:
            if not v:
                continue
            lines.append(f"{f.name} = " + ", ".join(repr(x) for x in v))
        elif isinstance(v, bool):
            lines.append(f"{f.name} = {'true' if v else 'false'}")
        elif isinstance(v, float):
            lines.append(f"{f.name} = {v!r}")
        else:
            lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


def load_config(path) -> ExperimentConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


@dataclass(frozen=True)
class ExperimentRecord:
    experiment: str
    n: int
    k: int
    m: int
    instance: int
    seed: int
    quantity: str
    value: float
    trials_used: int = 0
    elapsed_ms: float = 0.0
    error: str = ""


def _instance_good_fraction(cfg, n, k, m, rng):
    inst = sample_P(n, k, m, rng)
    gc = good_count(inst.formula, inst.sigma)
    return [
        ("good_count", gc, 0),
        ("good_fraction", gc / n, 0),
        ("expected_good_fraction", expected_good_count(n, k, m) / n, 0),
        ("predicted_good_fraction", predicted_good_fraction(n, k, m, cfg.policy), 0),
    ]


def _instance_ppz_success(cfg, n, k, m, rng):
    inst = sample_P(n, k, m, rng)
    z = good_count(inst.formula, inst.sigma)
    succ, hits = ppz_success_counts(inst.formula, cfg.trials, rng, target=inst.sigma)
    return [
        ("good_count", z, 0),
        ("success_freq", succ / cfg.trials, cfg.trials),
        ("sigma_freq", hits / cfg.trials, cfg.trials),
        ("bound", 2.0 ** -(n - z), 0),
    ]


def _instance_counting(cfg, n, k, m, rng):
    if cfg.dist == "planted":
        F = sample_P(n, k, m, rng).formula
    else:
        F = sample_R(n, k, m, rng)
    rows = [("solutions", count_solutions(F).solutions, 0)]
    if cfg.dist == "random":
        rows.append(("expected_solutions", 2.0 ** expected_solutions_log2(n, k, m), 0))
    else:
        try:
            rows.append(("log2_upper_bound", ez_upper_bound_log2(n, k, m)[0], 0))
        except ValueError:
            pass
    return rows


def _instance_end_to_end(cfg, n, k, m, rng):
    F = sample_R_plus(n, k, m, rng, max_attempts=cfg.max_attempts, method="auto")
    out = solve_random_ksat(F, n, k, m, cfg.policy, rng)
    verified = out.found and eval_formula(F, out.assignment)
    return [
        ("found", int(out.found), out.trials_used),
        ("verified", int(verified), out.trials_used),
        ("ppz_branch", int(choose_branch(n, k, m, cfg.policy) == "ppz"), 0),
    ]


_RUNNERS = {
    "good_fraction": _instance_good_fraction,
    "ppz_success": _instance_ppz_success,
    "counting": _instance_counting,
    "end_to_end": _instance_end_to_end,
}


def _run_job(job) -> list[ExperimentRecord]:
    cfg, point_index, (n, k, m), instance = job
    seed = RandomStream(cfg.seed, (point_index, instance)).derive_seed()
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    try:
        rows = _RUNNERS[cfg.experiment](cfg, n, k, m, rng)
        err = ""
    except KsatError as exc:
        rows = [("status", 0, 0)]
        err = f"{type(exc).__name__}: {exc}"
    elapsed = round((time.perf_counter() - t0) * 1000.0, 3) if cfg.timing else 0.0
    return [
        ExperimentRecord(cfg.experiment, n, k, m, instance, seed, q, float(v), int(tu), elapsed, err)
        for q, v, tu in rows
    ]


def worker_count(cfg: ExperimentConfig) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {env!r}") from None
    return max(1, cfg.workers)


def run_experiment(cfg: ExperimentConfig, output=None) -> list[ExperimentRecord]:
    """Run every (point, instance) job; write CSV to ``output`` or ``cfg.output`` if set."""
    jobs = [(cfg, p, pt, i) for p, pt in enumerate(cfg.points()) for i in range(cfg.instances)]
    workers = worker_count(cfg)
    if workers == 1:
        chunks = [_run_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_job, jobs))
    records = [r for chunk in chunks for r in chunk]
    path = output or cfg.output
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(format_csv(cfg, records))
    return records


def _fmt(v) -> str:
    if isinstance(v, float):
        if v.is_integer() and abs(v) < 2**53:
            return str(int(v))
        return repr(v)
    return str(v)


def format_csv(cfg: ExperimentConfig, records) -> str:
    buf = io.StringIO()
    buf.write(f"# experiment: {cfg.experiment}\n")
    buf.write(f"# master_seed: {cfg.seed}\n")
    buf.write(f"# ksatlab_version: {__version__}\n")
    buf.write(f"# schema: {SCHEMA_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        d = asdict(r)
        w.writerow([_fmt(d[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def csv_body(text: str) -> str:
    """The CSV without its ``#`` provenance header."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))


def read_csv(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith("#")))
