"""Additive element-wise NMF updates with a maintained residual matrix.

Each entry of W (then H) is moved by the exact minimizer of the objective
along that coordinate, subject to staying nonnegative. Keeping ``D = WH - V``
up to date makes every coordinate update cost O(m) for W and O(n) for H.

The sweep kernels come from the compiled ``_sweep`` extension when it is
importable and from ``_sweep_py`` otherwise; set ``ADDNMF_PURE_PYTHON=1``
to force the fallback. :data:`BACKEND` names the one in use.
"""
import os
import time
from dataclasses import dataclass

import numpy as np

from . import _sweep_py
from .config import FactorPair, SolverConfig
from .loop import run_stepper
from .matrix import DimensionError, as_matrix, check_shapes

if os.environ.get("ADDNMF_PURE_PYTHON", "") not in ("", "0"):
    _kernels = _sweep_py
    BACKEND = "python"
else:
    try:
        from . import _sweep as _kernels
        BACKEND = "cython"
    except ImportError:
        _kernels = _sweep_py
        BACKEND = "python"

__all__ = [
    "BACKEND",
    "ResidualDriftError",
    "ResidualState",
    "w_step",
    "h_step",
    "sweep_w",
    "sweep_h",
    "transform_t",
    "AdditiveStepper",
    "solve_additive",
    "sweep_multiplies",
]


class ResidualDriftError(ArithmeticError):
    """A nonzero gradient entry was found for a factor row/column of zero norm.

    Exact arithmetic rules this out, so it means the maintained residual no
    longer matches ``WH - V``.
    """


def w_step(p, q, w_ij):
    """Constrained minimizer of ``p a**2 / 2 + q a`` over ``a >= -w_ij``.

    `p` is the squared norm of the matching row of H and `q` the matching
    gradient entry.
    """
    if q == 0.0:
        return 0.0
    if p == 0.0:
        raise ResidualDriftError(f"q={q!r} with p=0")
    a = -q / p
    if q > 0.0 and a < -w_ij:
        return -w_ij
    return a


def h_step(u, v, h_ij):
    """Same as :func:`w_step`, for an entry of H."""
    return w_step(u, v, h_ij)


@dataclass
class ResidualState:
    """Factors plus the maintained residual ``d = w @ h - v``.

    Sweeps mutate the arrays in place.
    """

    v: np.ndarray
    w: np.ndarray
    h: np.ndarray
    d: np.ndarray
    f_cached: float

    @classmethod
    def from_factors(cls, v, w, h, copy=True):
        v = as_matrix(v, "V")
        w = as_matrix(w, "W", copy=copy)
        h = as_matrix(h, "H", copy=copy)
        check_shapes(v, w, h)
        if (w < 0).any() or (h < 0).any():
            raise ValueError("initial factors must be nonnegative")
        state = cls(v, w, h, np.empty_like(v), 0.0)
        state.refresh()
        return state

    def refresh(self):
        """Recompute the residual from scratch and update the cached objective."""
        np.subtract(self.w @ self.h, self.v, out=self.d)
        self.update_objective()

    def update_objective(self):
        dr = self.d.ravel()
        self.f_cached = 0.5 * float(np.dot(dr, dr))
        return self.f_cached

    def drift(self):
        """Frobenius distance between the maintained and the exact residual."""
        return float(np.linalg.norm(self.d - (self.w @ self.h - self.v)))

    def copy(self):
        return ResidualState(self.v, self.w.copy(), self.h.copy(),
                             self.d.copy(), self.f_cached)


def _check(status, which):
    if status != 0:
        raise ResidualDriftError(
            f"nonzero gradient with zero norm while sweeping {which}")


def sweep_w(state, counter=None):
    """Update every entry of W once, columns outermost.

    `counter` (pure-Python kernels only) collects multiplication counts.
    """
    kern = _sweep_py if counter is not None else _kernels
    _check(kern.sweep_w(state.w, state.h, state.d, counter=counter), "W")
    return state


def sweep_h(state, counter=None):
    """Update every entry of H once, rows outermost."""
    kern = _sweep_py if counter is not None else _kernels
    _check(kern.sweep_h(state.w, state.h, state.d, counter=counter), "H")
    return state


def transform_t(state, counter=None):
    """One full sweep: all of W, then all of H. Refreshes ``f_cached``."""
    sweep_w(state, counter)
    sweep_h(state, counter)
    state.update_objective()
    return state


def sweep_multiplies(n, m, r):
    """Multiplications in one sweep: inner products, residual updates, norms."""
    return 4 * n * m * r + r * (n + m)


class AdditiveStepper:
    name = "additive"

    def __init__(self, v, w0, h0, refresh_interval=64):
        self.state = ResidualState.from_factors(v, w0, h0)
        self.refresh_interval = refresh_interval
        self.sweeps = 0
        n, m = self.state.v.shape
        self.multiplies_per_step = sweep_multiplies(n, m, self.state.w.shape[1])

    @property
    def v(self):
        return self.state.v

    @property
    def w(self):
        return self.state.w

    @property
    def h(self):
        return self.state.h

    def objective(self):
        return self.state.f_cached

    def step(self):
        transform_t(self.state)
        self.sweeps += 1
        if self.refresh_interval and self.sweeps % self.refresh_interval == 0:
            self.state.refresh()


def solve_additive(v, w0, h0, config=None):
    """Run additive sweeps from ``(w0, h0)`` until a stopping rule fires.

    Parameters
    ----------
    v : (n, m) array_like
        Nonnegative data matrix.
    w0, h0 : array_like
        Nonnegative initial factors of shapes ``(n, r)`` and ``(r, m)``.
        They are copied, not modified.
    config : SolverConfig, optional
        Budgets and tolerances; ``config.algorithm`` is ignored.

    Returns
    -------
    factors : FactorPair
    trace : list of TraceRecord
        Starts with the initial point at sweep 0.
    """
    config = config or SolverConfig()
    if config.rank is not None and np.shape(w0)[1] != config.rank:
        raise DimensionError(
            f"W0 has {np.shape(w0)[1]} columns but rank is {config.rank}")
    start = time.perf_counter()
    stepper = AdditiveStepper(v, w0, h0, config.refresh_interval)
    trace = run_stepper(stepper, config, start)
    return FactorPair(stepper.w, stepper.h), trace
