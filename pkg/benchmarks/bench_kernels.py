"""Time one additive sweep with the compiled and the pure-Python kernels.

    python benchmarks/bench_kernels.py --sizes 50x25x5 200x100x10 --sweeps 20

Both backends start from the same instance; the table also reports how far
their iterates drift apart after the timed sweeps.
"""
import argparse
import timeit

import numpy as np

from addnmf import _sweep_py
from addnmf.additive import ResidualState
from addnmf.bench import InstanceSpec, gen_instance

try:
    from addnmf import _sweep as _sweep_c
except ImportError:
    _sweep_c = None


def parse_size(text):
    try:
        n, m, r = (int(t) for t in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NxMxR, got {text!r}") from None
    return n, m, r


def run_sweeps(kernels, state, sweeps):
    for _ in range(sweeps):
        kernels.sweep_w(state.w, state.h, state.d)
        kernels.sweep_h(state.w, state.h, state.d)


def time_backend(kernels, v, w0, h0, sweeps, repeat):
    best = np.inf
    state = None
    for _ in range(repeat):
        state = ResidualState.from_factors(v, w0, h0)
        best = min(best, timeit.timeit(lambda: run_sweeps(kernels, state, sweeps), number=1))
    return best / sweeps, state


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=parse_size, nargs="+",
                        default=[(50, 25, 5), (200, 100, 10)])
    parser.add_argument("--sweeps", type=int, default=20)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    backends = [("python", _sweep_py)]
    if _sweep_c is not None:
        backends.insert(0, ("cython", _sweep_c))
    else:
        print("compiled extension not available; timing the fallback only")

    header = f"{'size':>14} {'backend':>8} {'ms/sweep':>10} {'speedup':>8} {'max |diff|':>11}"
    print(header)
    print("-" * len(header))
    for n, m, r in args.sizes:
        v, w0, h0 = gen_instance(InstanceSpec(n, m, r, seed=args.seed))
        results = {name: time_backend(k, v, w0, h0, args.sweeps, args.repeat)
                   for name, k in backends}
        slowest = results["python"][0]
        ref = results[backends[0][0]][1]
        for name, (per_sweep, state) in results.items():
            diff = max(np.abs(state.w - ref.w).max(), np.abs(state.h - ref.h).max())
            print(f"{f'{n}x{m}x{r}':>14} {name:>8} {per_sweep * 1e3:10.3f} "
                  f"{slowest / per_sweep:8.1f} {diff:11.1e}")


if __name__ == "__main__":
    main()
