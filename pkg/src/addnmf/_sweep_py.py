"""Pure-Python sweeps; same contract as the compiled ``_sweep`` module.

`counter`, when given, is a dict that accumulates multiplications at the
designated sites: ``"norm"`` (p and u), ``"inner"`` (q and v) and
``"update"`` (residual row/column updates), each split by ``"_w"``/``"_h"``.
"""


def _bump(counter, key, k):
    if counter is not None:
        counter[key] = counter.get(key, 0) + k


def sweep_w(w, h, d, counter=None):
    n, r = w.shape
    m = h.shape[1]
    for j in range(r):
        hj = h[j]
        p = float(hj @ hj)
        _bump(counter, "norm_w", m)
        for i in range(n):
            di = d[i]
            q = float(di @ hj)
            _bump(counter, "inner_w", m)
            if q == 0.0:
                continue
            if p == 0.0:
                return -1
            a = -q / p
            wij = w[i, j]
            if q > 0.0 and a < -wij:
                a = -wij
                w[i, j] = 0.0
            else:
                w[i, j] = wij + a
            di += a * hj
            _bump(counter, "update_w", m)
    return 0


def sweep_h(w, h, d, counter=None):
    n, r = w.shape
    m = h.shape[1]
    for i in range(r):
        wi = w[:, i].copy()
        u = float(wi @ wi)
        _bump(counter, "norm_h", n)
        for j in range(m):
            dj = d[:, j]
            v = float(wi @ dj)
            _bump(counter, "inner_h", n)
            if v == 0.0:
                continue
            if u == 0.0:
                return -1
            beta = -v / u
            hij = h[i, j]
            if v > 0.0 and beta < -hij:
                beta = -hij
                h[i, j] = 0.0
            else:
                h[i, j] = hij + beta
            d[:, j] += beta * wi
            _bump(counter, "update_h", n)
    return 0
