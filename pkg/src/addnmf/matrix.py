"""Dense matrix helpers and the least-squares NMF objective.

Matrices are plain ``numpy.ndarray`` objects of dtype float64 in C (row-major)
order. :func:`as_matrix` is the single gate through which user data enters the
library; everything downstream assumes its guarantees.
"""
import math

import numpy as np

__all__ = [
    "DimensionError",
    "as_matrix",
    "check_shapes",
    "matmul",
    "matmul_naive",
    "residual",
    "objective",
    "objective_accurate",
    "grad_w",
    "grad_h",
]


class DimensionError(ValueError):
    """Raised when matrix shapes do not conform."""


def as_matrix(a, name="matrix", copy=False):
    """Return `a` as a finite, 2-D, C-contiguous float64 array.

    Parameters
    ----------
    a : array_like
        Input data. 1-D input is rejected rather than guessed at.
    name : str
        Used in error messages.
    copy : bool
        Always return a fresh array, even if `a` already qualifies.

    Raises
    ------
    DimensionError
        If `a` is not two-dimensional or has an empty axis.
    ValueError
        If any entry is NaN or infinite.
    """
    if copy:
        arr = np.array(a, dtype=np.float64, order="C")
    else:
        arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got {arr.ndim}-D")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"{name} has an empty dimension: {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite entries")
    return arr


def check_shapes(v, w, h):
    """Return ``(n, m, r)`` after verifying ``w @ h`` conforms to `v`."""
    n, m = v.shape
    if w.ndim != 2 or h.ndim != 2:
        raise DimensionError("factors must be 2-D")
    if w.shape[0] != n:
        raise DimensionError(f"W has {w.shape[0]} rows, V has {n}")
    if h.shape[1] != m:
        raise DimensionError(f"H has {h.shape[1]} columns, V has {m}")
    if w.shape[1] != h.shape[0]:
        raise DimensionError(
            f"inner dimensions differ: W is {w.shape}, H is {h.shape}")
    return n, m, w.shape[1]


def matmul(a, b):
    """Matrix product with an explicit shape check."""
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def matmul_naive(a, b):
    # Reference triple loop; used as a test oracle only.
    if len(a[0]) != len(b):
        raise DimensionError("inner dimensions differ")
    rows, inner, cols = len(a), len(b), len(b[0])
    out = np.zeros((rows, cols))
    for i in range(rows):
        for j in range(cols):
            s = 0.0
            for k in range(inner):
                s += a[i][k] * b[k][j]
            out[i, j] = s
    return out


def residual(v, w, h):
    """Return ``D = W H - V``."""
    check_shapes(v, w, h)
    return w @ h - v


def objective(v, w, h):
    """Half the squared Frobenius norm of ``W H - V``."""
    d = residual(v, w, h)
    return 0.5 * float(np.dot(d.ravel(), d.ravel()))


_SPLITTER = 134217729.0  # 2**27 + 1


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    x = a * b
    a1, a2 = _split(a)
    b1, b2 = _split(b)
    return x, a2 * b2 - (((x - a1 * b1) - a2 * b1) - a1 * b2)


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def objective_expansion(v, w, h):
    """Floats whose exact sum is twice the objective of ``(W, H)``.

    The sum matches ``||W H - V||^2`` to about 1e-30 relative. Summing two
    expansions with :func:`math.fsum` compares objectives far more finely
    than the spacing of floats near ``f``.
    """
    check_shapes(v, w, h)
    # All r exact products w[i, k] * h[k, j] at once, shape (r, n, m).
    a, b = w.T[:, :, None], h[:, None, :]
    p = a * b
    a1, a2 = _split(a)
    b1, b2 = _split(b)
    pe = a2 * b2 - (((p - a1 * b1) - a2 * b1) - a1 * b2)
    s = -v
    c = pe.sum(axis=0)
    for k in range(p.shape[0]):
        s, se = _two_sum(s, p[k])
        c += se
    sq, sqe = _two_prod(s, s)
    # The correction terms are ~1e-16 of the squares; a pairwise sum of them
    # costs nothing measurable in accuracy and keeps fsum's input small.
    small = np.sum(sqe) + np.sum(2.0 * s * c) + np.sum(c * c)
    return np.append(sq.ravel(), small)


def objective_accurate(v, w, h):
    """:func:`objective` evaluated with error-free transformations.

    The residual is accumulated in double-double arithmetic and the squares
    summed with :func:`math.fsum`, so the result is the exact objective of the
    stored ``(W, H)`` up to a final rounding. Since rounding is monotone, a
    true decrease of the objective never shows up as an increase.
    """
    return 0.5 * math.fsum(objective_expansion(v, w, h))


def objective_difference(v, w0, h0, w1, h1):
    """``f(W0, H0) - f(W1, H1)`` without cancellation.

    Both objectives are expanded into error-free terms and summed together,
    so decreases far below the spacing of floats near ``f`` keep their sign.
    """
    return 0.5 * math.fsum(np.concatenate([objective_expansion(v, w0, h0),
                                           -objective_expansion(v, w1, h1)]))


def grad_w(v, w, h):
    """Gradient of :func:`objective` with respect to W, ``(WH - V) H^T``."""
    return residual(v, w, h) @ h.T


def grad_h(v, w, h):
    """Gradient of :func:`objective` with respect to H, ``W^T (WH - V)``."""
    return w.T @ residual(v, w, h)
