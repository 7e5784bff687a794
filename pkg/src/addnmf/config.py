"""Solver configuration and the records solvers hand back."""
from dataclasses import asdict, dataclass
from typing import NamedTuple, Optional

import numpy as np

ALGORITHMS = ("additive", "ls", "gz")


class ConfigError(ValueError):
    """Raised for invalid solver or benchmark settings."""


@dataclass(frozen=True)
class SolverConfig:
    """Knobs shared by every solver.

    A solve stops at the first of: `max_sweeps` sweeps, `time_budget_seconds`
    of wall time, normalized KKT residual ``<= tol_delta``, or relative
    objective decrease over one sweep ``< tol_f``. `refresh_interval` is the
    number of sweeps between full recomputations of the additive solver's
    residual matrix (0 disables). `trace_every` thins trace sampling; the
    residual-based stop is only checked on sampled sweeps.
    """

    algorithm: str = "additive"
    rank: Optional[int] = None
    max_sweeps: int = 1000
    time_budget_seconds: Optional[float] = None
    tol_delta: float = 1e-4
    tol_f: float = 0.0
    refresh_interval: int = 64
    seed: int = 0
    trace_every: int = 1

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {self.algorithm!r}; "
                              f"expected one of {', '.join(ALGORITHMS)}")
        if self.rank is not None and self.rank < 1:
            raise ConfigError("rank must be positive")
        if self.max_sweeps < 1:
            raise ConfigError("max_sweeps must be positive")
        if self.time_budget_seconds is not None and self.time_budget_seconds <= 0:
            raise ConfigError("time budget must be positive")
        if self.tol_delta < 0 or self.tol_f < 0:
            raise ConfigError("tolerances must be nonnegative")
        if self.refresh_interval < 0:
            raise ConfigError("refresh_interval must be nonnegative")
        if self.trace_every < 1:
            raise ConfigError("trace_every must be positive")


class TraceRecord(NamedTuple):
    sweep: int
    elapsed_seconds: float
    objective: float
    delta_normalized: float

    def to_dict(self):
        return self._asdict()


class FactorPair(NamedTuple):
    w: np.ndarray
    h: np.ndarray


def config_dict(config):
    return asdict(config)
