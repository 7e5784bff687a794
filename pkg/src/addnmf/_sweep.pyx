# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Gauss-Seidel sweeps over W and H with residual maintenance.

Both functions update their arguments in place and return 0, or -1 if a
nonzero inner product met a zero squared norm (the residual has drifted).
"""


cdef int _sweep_w(double[:, ::1] w, double[:, ::1] h,
                  double[:, ::1] d) noexcept nogil:
    cdef Py_ssize_t n = w.shape[0], r = w.shape[1], m = h.shape[1]
    cdef Py_ssize_t i, j, b
    cdef double p, q, a
    for j in range(r):
        p = 0.0
        for b in range(m):
            p += h[j, b] * h[j, b]
        for i in range(n):
            q = 0.0
            for b in range(m):
                q += d[i, b] * h[j, b]
            if q == 0.0:
                continue
            if p == 0.0:
                return -1
            a = -q / p
            if q > 0.0 and a < -w[i, j]:
                a = -w[i, j]
                w[i, j] = 0.0
            else:
                w[i, j] += a
            for b in range(m):
                d[i, b] += a * h[j, b]
    return 0


cdef int _sweep_h(double[:, ::1] w, double[:, ::1] h,
                  double[:, ::1] d) noexcept nogil:
    cdef Py_ssize_t n = w.shape[0], r = w.shape[1], m = h.shape[1]
    cdef Py_ssize_t i, j, a
    cdef double u, v, beta
    for i in range(r):
        u = 0.0
        for a in range(n):
            u += w[a, i] * w[a, i]
        for j in range(m):
            v = 0.0
            for a in range(n):
                v += w[a, i] * d[a, j]
            if v == 0.0:
                continue
            if u == 0.0:
                return -1
            beta = -v / u
            if v > 0.0 and beta < -h[i, j]:
                beta = -h[i, j]
                h[i, j] = 0.0
            else:
                h[i, j] += beta
            for a in range(n):
                d[a, j] += beta * w[a, i]
    return 0


def sweep_w(double[:, ::1] w, double[:, ::1] h, double[:, ::1] d,
            counter=None):
    cdef int status
    if counter is not None:
        raise NotImplementedError("operation counting needs the Python kernels")
    with nogil:
        status = _sweep_w(w, h, d)
    return status


def sweep_h(double[:, ::1] w, double[:, ::1] h, double[:, ::1] d,
            counter=None):
    cdef int status
    if counter is not None:
        raise NotImplementedError("operation counting needs the Python kernels")
    with nogil:
        status = _sweep_h(w, h, d)
    return status
