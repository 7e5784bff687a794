"""Comparison baselines: Lee-Seung multiplicative updates and the
Gonzalez-Zhang per-column step-length acceleration.

Both are written as a step along the scaled negative gradient
``eta * (W^T V - W^T W H)`` with ``eta = H / (W^T W H)``. For Lee-Seung the
step length is one, which is algebraically the familiar multiplicative rule
``H * (W^T V) / (W^T W H)``. Gonzalez-Zhang picks one step length per column
of H (and per row of W) by an exact line search capped at 99% of the
distance to the boundary of the nonnegative orthant.
"""
import time
from typing import NamedTuple

import numpy as np

from .config import FactorPair, SolverConfig
from .loop import run_stepper
from .matrix import as_matrix, check_shapes, objective

__all__ = [
    "DENOM_FLOOR",
    "GzStepInputs",
    "ls_update",
    "gz_step_scalar",
    "gz_update",
    "LsStepper",
    "GzStepper",
    "solve_ls",
    "solve_gz",
    "ls_multiplies",
    "gz_multiplies",
]

DENOM_FLOOR = 1e-12
BOUNDARY_FRACTION = 0.99


class GzStepInputs(NamedTuple):
    a_mat: np.ndarray
    b_vec: np.ndarray
    x_vec: np.ndarray


def _direction(v, w, h):
    # Returns the Gram matrix W^T W, the negative gradient and the scaled
    # step direction for H.
    g = w.T @ w
    den = g @ h
    q = w.T @ v - den
    p = h / np.maximum(den, DENOM_FLOOR) * q
    return g, q, p


def _ls_half(v, w, h):
    _, _, p = _direction(v, w, h)
    return np.maximum(h + p, 0.0)


def ls_update(v, w, h):
    """One Lee-Seung iteration: H first, then W against the new H."""
    check_shapes(v, w, h)
    h_new = _ls_half(v, w, h)
    w_new = _ls_half(v.T, h_new.T, w.T).T
    return np.ascontiguousarray(w_new), h_new


def gz_step_scalar(a, b, x):
    """Step length for the scaled gradient direction of ``min ||A x - b||^2``.

    Returns the exact line-search step along ``p = x / (A^T A x) * q`` with
    ``q = A^T (b - A x)``, capped at 0.99 of the largest step keeping
    ``x + step * p`` nonnegative. Degenerate directions give 0.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if a.shape != (b.shape[0], x.shape[0]):
        raise ValueError(f"A {a.shape} does not conform to b {b.shape}, x {x.shape}")
    if (x < 0).any():
        raise ValueError("x must be nonnegative")
    q = a.T @ (b - a @ x)
    p = x / np.maximum(a.T @ (a @ x), DENOM_FLOOR) * q
    ap = a @ p
    curv = float(ap @ ap)
    if not q.any() or curv <= DENOM_FLOOR:
        return 0.0
    theta = float(p @ q) / curv
    neg = p < 0
    if neg.any():
        theta = min(theta, BOUNDARY_FRACTION * float(np.min(-x[neg] / p[neg])))
    return theta


def _gz_thetas(g, q, p, h):
    pq = np.einsum("ij,ij->j", p, q)
    curv = np.einsum("ij,ij->j", p, g @ p)
    neg = p < 0
    ratio = np.full(p.shape, np.inf)
    ratio[neg] = -h[neg] / p[neg]
    cap = BOUNDARY_FRACTION * ratio.min(axis=0)
    ok = q.any(axis=0) & (curv > DENOM_FLOOR)
    theta = np.zeros(p.shape[1])
    theta[ok] = np.minimum(pq[ok] / curv[ok], cap[ok])
    return theta


def _gz_half(v, w, h, hook, which):
    g, q, p = _direction(v, w, h)
    theta = _gz_thetas(g, q, p, h)
    if hook is not None:
        theta = np.asarray(hook(theta, which), dtype=np.float64)
    return np.maximum(h + theta * p, 0.0)


def gz_update(v, w, h, theta_hook=None):
    """One Gonzalez-Zhang iteration.

    Parameters
    ----------
    v, w, h : ndarray
        Data and current nonnegative factors.
    theta_hook : callable, optional
        ``theta_hook(theta, which)`` may replace the step lengths, where
        `which` is ``"h"`` (one entry per column of H) or ``"w"`` (one per
        row of W). Used to test the reduction to :func:`ls_update`.
    """
    check_shapes(v, w, h)
    h_new = _gz_half(v, w, h, theta_hook, "h")
    w_new = _gz_half(v.T, h_new.T, w.T, theta_hook, "w").T
    return np.ascontiguousarray(w_new), h_new


def ls_multiplies(n, m, r):
    return 2 * n * m * r + 2 * r * r * (n + m) + r * (n + m)


def gz_multiplies(n, m, r):
    # Lee-Seung work plus p^T q, G p, p^T G p and theta * p per column/row.
    return ls_multiplies(n, m, r) + r * r * (n + m) + 3 * r * (n + m)


class _BaselineStepper:
    name = None

    def __init__(self, v, w0, h0):
        self.v = as_matrix(v, "V")
        self.w = as_matrix(w0, "W", copy=True)
        self.h = as_matrix(h0, "H", copy=True)
        n, m, r = check_shapes(self.v, self.w, self.h)
        if (self.w < 0).any() or (self.h < 0).any():
            raise ValueError("initial factors must be nonnegative")
        self.sweeps = 0
        self.multiplies_per_step = self._multiplies(n, m, r)
        self._f = None

    def objective(self):
        if self._f is None:
            self._f = objective(self.v, self.w, self.h)
        return self._f

    def step(self):
        self.w, self.h = self._update(self.v, self.w, self.h)
        self.sweeps += 1
        self._f = None


class LsStepper(_BaselineStepper):
    name = "ls"
    _multiplies = staticmethod(ls_multiplies)
    _update = staticmethod(ls_update)


class GzStepper(_BaselineStepper):
    name = "gz"
    _multiplies = staticmethod(gz_multiplies)
    _update = staticmethod(gz_update)


def _solve(cls, v, w0, h0, config):
    config = config or SolverConfig()
    start = time.perf_counter()
    stepper = cls(v, w0, h0)
    trace = run_stepper(stepper, config, start)
    return FactorPair(stepper.w, stepper.h), trace


def solve_ls(v, w0, h0, config=None):
    """Lee-Seung iterations under the stopping rules of `config`."""
    return _solve(LsStepper, v, w0, h0, config)


def solve_gz(v, w0, h0, config=None):
    """Gonzalez-Zhang iterations under the stopping rules of `config`."""
    return _solve(GzStepper, v, w0, h0, config)
