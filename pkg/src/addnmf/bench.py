"""Random instances, budgeted runs and the two comparison experiments.

Random numbers come from numpy's PCG64 bit generator seeded with the
instance seed; V, W0 and H0 are drawn in that order from one stream, each
in row-major order via ``Generator.uniform``.

Budgets are expressed in one of three units:

``sweeps``
    Iterations of the algorithm (one additive sweep, one LS or GZ update).
``multiplies``
    Floating-point multiplications, using each algorithm's per-iteration
    count; an algorithm runs as many whole iterations as fit.
``seconds``
    Wall time on a monotonic clock, checked between iterations. Not
    reproducible; arms always run one after another in this mode.
"""
import csv
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Tuple

import numpy as np

from .additive import sweep_multiplies
from .baselines import gz_multiplies, ls_multiplies
from .config import ALGORITHMS, ConfigError, SolverConfig
from .loop import sample
from .solvers import make_stepper

__all__ = [
    "BUDGET_MODES",
    "InstanceSpec",
    "BudgetedRun",
    "ComparisonRow",
    "gen_instance",
    "gen_init",
    "multiplies_per_step",
    "run_budgeted",
    "experiment_one",
    "experiment_two",
    "table_to_csv",
    "trace_to_json",
]

BUDGET_MODES = ("sweeps", "multiplies", "seconds")


def _check_range(name, rng):
    lo, hi = rng
    if not (0 <= lo <= hi):
        raise ConfigError(f"{name} must satisfy 0 <= lo <= hi, got {rng}")


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    m: int
    r: int
    v_range: Tuple[float, float] = (0.0, 500.0)
    w0_range: Tuple[float, float] = (0.0, 5.0)
    h0_range: Tuple[float, float] = (0.0, 5.0)
    seed: int = 0

    def __post_init__(self):
        if min(self.n, self.m, self.r) < 1:
            raise ConfigError("n, m and r must be positive")
        _check_range("v_range", self.v_range)
        _check_range("w0_range", self.w0_range)
        _check_range("h0_range", self.h0_range)


@dataclass(frozen=True)
class BudgetedRun:
    algorithm: str = "additive"
    budget_mode: str = "sweeps"
    checkpoints: Tuple[float, ...] = field(default=(100,))

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}")
        if self.budget_mode not in BUDGET_MODES:
            raise ConfigError(f"unknown budget mode {self.budget_mode!r}")
        cps = tuple(self.checkpoints)
        if not cps:
            raise ConfigError("at least one checkpoint is required")
        if any(b <= a for a, b in zip(cps, cps[1:])):
            raise ConfigError("checkpoints must be strictly increasing")
        if cps[0] < 0:
            raise ConfigError("checkpoints must be nonnegative")
        object.__setattr__(self, "checkpoints", cps)


class ComparisonRow(NamedTuple):
    checkpoint: float
    algorithm: str
    objective: float
    delta_normalized: float


def gen_instance(spec):
    """Draw ``(V, W0, H0)`` for `spec`; identical seeds give identical bits."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    v = rng.uniform(*spec.v_range, size=(spec.n, spec.m))
    w0 = rng.uniform(*spec.w0_range, size=(spec.n, spec.r))
    h0 = rng.uniform(*spec.h0_range, size=(spec.r, spec.m))
    return v, w0, h0


def gen_init(spec, trial):
    """Initial factors for trial `trial`; trial 0 reuses those of `gen_instance`."""
    if trial == 0:
        return gen_instance(spec)[1:]
    rng = np.random.Generator(np.random.PCG64([spec.seed, trial]))
    w0 = rng.uniform(*spec.w0_range, size=(spec.n, spec.r))
    h0 = rng.uniform(*spec.h0_range, size=(spec.r, spec.m))
    return w0, h0


def multiplies_per_step(algorithm, n, m, r):
    counts = {"additive": sweep_multiplies, "ls": ls_multiplies,
              "gz": gz_multiplies}
    try:
        return counts[algorithm](n, m, r)
    except KeyError:
        raise ConfigError(f"unknown algorithm {algorithm!r}") from None


def run_budgeted(v, w0, h0, run, config=None):
    """Run ``run.algorithm`` from ``(w0, h0)``, sampling at each checkpoint.

    Tolerance-based stopping rules in `config` are ignored; only
    ``config.refresh_interval`` is used. Returns one TraceRecord per
    checkpoint.
    """
    config = config or SolverConfig()
    start = time.perf_counter()
    stepper = make_stepper(run.algorithm, v, w0, h0, config)
    cost = stepper.multiplies_per_step
    records = []
    for cp in run.checkpoints:
        if run.budget_mode == "sweeps":
            while stepper.sweeps < cp:
                stepper.step()
        elif run.budget_mode == "multiplies":
            while (stepper.sweeps + 1) * cost <= cp:
                stepper.step()
        else:
            while time.perf_counter() - start < cp:
                stepper.step()
        records.append(sample(stepper, start))
    return records


def _threads():
    try:
        return max(1, int(os.environ.get("NMF_THREADS", "1")))
    except ValueError:
        return 1


def _run_arms(jobs, budgets):
    # jobs: list of zero-argument callables; results keep job order.
    workers = 1 if budgets.budget_mode == "seconds" else min(_threads(), len(jobs))
    if workers == 1:
        return [job() for job in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: job(), jobs))


def _rows(budgets, algorithms, values):
    rows = []
    for k, cp in enumerate(budgets.checkpoints):
        for alg, (f, delta) in zip(algorithms, values):
            rows.append(ComparisonRow(cp, alg, f[k], delta[k]))
    return rows


def experiment_one(scale, budgets, config=None, algorithms=ALGORITHMS):
    """Normalized KKT residual of each algorithm at each checkpoint.

    All algorithms share the instance and initial factors drawn from
    `scale`. ``budgets.algorithm`` is ignored.
    """
    v, w0, h0 = gen_instance(scale)
    jobs = [
        (lambda a=a: run_budgeted(v, w0, h0, replace(budgets, algorithm=a), config))
        for a in algorithms
    ]
    traces = _run_arms(jobs, budgets)
    values = [([t.objective for t in tr], [t.delta_normalized for t in tr])
              for tr in traces]
    return _rows(budgets, algorithms, values)


def experiment_two(scale, budgets, trials, config=None, algorithms=ALGORITHMS):
    """Objective and KKT residual averaged over `trials` initializations.

    V is fixed by ``scale.seed``; trial ``t`` draws its initial factors with
    :func:`gen_init`.
    """
    if trials < 1:
        raise ConfigError("trials must be at least 1")
    v = gen_instance(scale)[0]
    inits = [gen_init(scale, t) for t in range(trials)]
    jobs = [
        (lambda a=a, wh=wh: run_budgeted(
            v, wh[0], wh[1], replace(budgets, algorithm=a), config))
        for a in algorithms for wh in inits
    ]
    traces = _run_arms(jobs, budgets)
    values = []
    for i in range(len(algorithms)):
        arm = traces[i * trials:(i + 1) * trials]
        f = np.array([[t.objective for t in tr] for tr in arm])
        delta = np.array([[t.delta_normalized for t in tr] for tr in arm])
        values.append((f.mean(axis=0).tolist(), delta.mean(axis=0).tolist()))
    return _rows(budgets, algorithms, values)


def _fmt(x):
    if isinstance(x, (int, np.integer)) or float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def table_to_csv(rows, fh=None):
    """Write comparison rows as CSV with a header; returns the text if `fh` is None."""
    out = io.StringIO() if fh is None else fh
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(ComparisonRow._fields)
    for row in rows:
        writer.writerow([_fmt(row.checkpoint), row.algorithm,
                         repr(float(row.objective)),
                         repr(float(row.delta_normalized))])
    if fh is None:
        return out.getvalue()
    return None


def trace_to_json(trace, fh=None):
    data = [rec._asdict() for rec in trace]
    if fh is None:
        return json.dumps(data)
    json.dump(data, fh)
    return None
