"""Nonnegative matrix factorization by additive element-wise updates.

The additive solver moves one entry of W or H at a time by the exact
nonnegative minimizer of the objective along that coordinate, keeping the
residual ``WH - V`` up to date so each move is cheap. Lee-Seung and
Gonzalez-Zhang updates are included as baselines, along with KKT residual
diagnostics and a small benchmark harness.
"""
__version__ = "0.1.0"

from .additive import (
    BACKEND,
    ResidualDriftError,
    ResidualState,
    h_step,
    solve_additive,
    sweep_h,
    sweep_w,
    transform_t,
    w_step,
)
from .baselines import gz_step_scalar, gz_update, ls_update, solve_gz, solve_ls
from .config import ConfigError, FactorPair, SolverConfig, TraceRecord
from .kkt import KktReport, is_kkt_point, kkt_residual
from .matrix import (
    DimensionError,
    grad_h,
    grad_w,
    matmul,
    objective,
    objective_accurate,
    objective_difference,
)
from .solvers import solve

__all__ = [
    "BACKEND",
    "ConfigError",
    "DimensionError",
    "FactorPair",
    "KktReport",
    "ResidualDriftError",
    "ResidualState",
    "SolverConfig",
    "TraceRecord",
    "grad_h",
    "grad_w",
    "gz_step_scalar",
    "gz_update",
    "h_step",
    "is_kkt_point",
    "kkt_residual",
    "ls_update",
    "matmul",
    "objective",
    "objective_accurate",
    "objective_difference",
    "solve",
    "solve_additive",
    "solve_gz",
    "solve_ls",
    "sweep_h",
    "sweep_w",
    "transform_t",
    "w_step",
]
