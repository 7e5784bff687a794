"""First-order stationarity diagnostics for NMF.

For ``(W, H) >= 0`` the KKT conditions of ``min f(W, H)`` hold exactly when
every term ``min(W_ia, grad_W_ia)`` and ``min(H_bj, grad_H_bj)`` is zero.
The residual sums their magnitudes; the normalized residual divides by the
number of nonzero terms so it does not grow with the problem size.
"""
from typing import NamedTuple

import numpy as np

from .matrix import check_shapes

__all__ = ["KktReport", "kkt_residual", "normalized_kkt", "is_kkt_point"]


class KktReport(NamedTuple):
    delta_raw: float
    count_w: int
    count_h: int
    delta_normalized: float
    objective: float

    def to_dict(self):
        return self._asdict()


def kkt_residual(v, w, h):
    """Compute the KKT residual of ``(W, H)`` for the data matrix `v`.

    Gradients are recomputed from scratch so the result does not depend on
    any state a solver maintains.

    Returns
    -------
    KktReport
    """
    check_shapes(v, w, h)
    d = w @ h - v
    tw = np.minimum(w, d @ h.T)
    th = np.minimum(h, w.T @ d)
    count_w = int(np.count_nonzero(tw))
    count_h = int(np.count_nonzero(th))
    delta = float(np.abs(tw).sum() + np.abs(th).sum())
    total = count_w + count_h
    delta_n = delta / total if total > 0 else 0.0
    f = 0.5 * float(np.dot(d.ravel(), d.ravel()))
    return KktReport(delta, count_w, count_h, delta_n, f)


def normalized_kkt(v, w, h):
    return kkt_residual(v, w, h).delta_normalized


def is_kkt_point(v, w, h, tol=0.0):
    """True when the normalized KKT residual is at most `tol`."""
    return kkt_residual(v, w, h).delta_normalized <= tol
