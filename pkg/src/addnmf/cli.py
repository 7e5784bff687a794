"""Command-line interface: ``addnmf factorize | diagnose | benchmark``.

Exit status is 0 on success, 2 for usage or input errors and 1 for anything
unexpected. Output files are written atomically, so a failed command never
leaves partial files behind.
"""
import argparse
import json
import sys
from contextlib import ExitStack

import numpy as np

from . import __version__
from .bench import BudgetedRun, InstanceSpec, experiment_one, experiment_two, table_to_csv
from .config import ALGORITHMS, ConfigError, SolverConfig
from .fileio import MatrixParseError, atomic_write, format_matrix, read_matrix
from .kkt import kkt_residual
from .matrix import DimensionError, check_shapes
from .solvers import solve


class InputError(Exception):
    """Bad user input; reported with exit status 2."""


def _positive_int(text):
    try:
        k = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return k


def _nonneg_int(text):
    k = int(text)
    if k < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return k


def _nonneg_float(text):
    x = float(text)
    if not x >= 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {text!r}")
    return x


def _positive_float(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return x


def _range(text):
    try:
        lo, hi = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO,HI, got {text!r}") from None
    if not 0 <= lo <= hi:
        raise argparse.ArgumentTypeError(f"need 0 <= LO <= HI, got {text!r}")
    return lo, hi


def _checkpoints(text):
    try:
        cps = [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad checkpoint list {text!r}") from None
    return tuple(int(c) if c.is_integer() else c for c in cps)


def _add_solver_flags(p):
    p.add_argument("--algorithm", choices=ALGORITHMS, default="additive")
    p.add_argument("--max-sweeps", type=_positive_int, default=1000)
    p.add_argument("--time-budget", type=_positive_float, default=None,
                   help="wall-time limit in seconds")
    p.add_argument("--tol-delta", type=_nonneg_float, default=1e-4,
                   help="stop when the normalized KKT residual is this small")
    p.add_argument("--tol-f", type=_nonneg_float, default=0.0,
                   help="stop when the relative objective decrease per sweep "
                        "drops below this (0 disables)")
    p.add_argument("--refresh-interval", type=_nonneg_int, default=64,
                   help="sweeps between full residual recomputations (0 disables)")
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="addnmf",
        description="Nonnegative matrix factorization by additive "
                    "coordinate updates, with LS/GZ baselines.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factorize", help="factorize a matrix file")
    p.add_argument("input", help="CSV or .mtx file holding V")
    p.add_argument("--rank", type=_positive_int, required=True)
    _add_solver_flags(p)
    p.add_argument("--init-range", type=_range, default=None,
                   help="draw W0, H0 uniformly from LO,HI instead of the "
                        "data-scaled default")
    p.add_argument("--output-w", required=True)
    p.add_argument("--output-h", required=True)
    p.add_argument("--trace", default=None, help="write the trace as JSON here")
    p.add_argument("--trace-every", type=_positive_int, default=1)

    p = sub.add_parser("diagnose", help="report KKT residuals of W, H for V")
    p.add_argument("v")
    p.add_argument("w")
    p.add_argument("h")

    p = sub.add_parser("benchmark", help="run a comparison experiment")
    p.add_argument("experiment", choices=("one", "two"))
    p.add_argument("--n", type=_positive_int, default=50)
    p.add_argument("--m", type=_positive_int, default=25)
    p.add_argument("--rank", type=_positive_int, default=5)
    p.add_argument("--v-range", type=_range, default=(0.0, 500.0))
    p.add_argument("--init-range", type=_range, default=None,
                   help="range for W0 and H0 (default 0,5 for one, 0,1 for two)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget-mode", choices=("sweeps", "multiplies", "seconds"),
                   default="sweeps")
    p.add_argument("--checkpoints", type=_checkpoints, default=(10, 20, 50, 100, 200))
    p.add_argument("--trials", type=_positive_int, default=None,
                   help="initializations to average over (experiment two only)")
    p.add_argument("--refresh-interval", type=_nonneg_int, default=64)
    p.add_argument("--out", required=True, help="CSV output path")
    p.set_defaults(subparser=p)
    return parser


def default_init(v, rank, seed, init_range=None):
    """Uniform random W0, H0; by default scaled so that W0 H0 matches V's mean."""
    n, m = v.shape
    rng = np.random.Generator(np.random.PCG64(seed))
    if init_range is None:
        scale = np.sqrt(float(v.mean()) / rank)
        return rng.uniform(size=(n, rank)) * scale, rng.uniform(size=(rank, m)) * scale
    return rng.uniform(*init_range, size=(n, rank)), rng.uniform(*init_range, size=(rank, m))


def _load(path, name):
    try:
        return read_matrix(path)
    except OSError as exc:
        raise InputError(f"cannot read {name} from {path}: {exc.strerror}") from None
    except MatrixParseError as exc:
        raise InputError(str(exc)) from None


def cmd_factorize(args):
    v = _load(args.input, "V")
    if (v < 0).any():
        raise InputError("NMF requires nonnegative input")
    config = SolverConfig(
        algorithm=args.algorithm, rank=args.rank, max_sweeps=args.max_sweeps,
        time_budget_seconds=args.time_budget, tol_delta=args.tol_delta,
        tol_f=args.tol_f, refresh_interval=args.refresh_interval,
        seed=args.seed, trace_every=args.trace_every)
    w0, h0 = default_init(v, args.rank, args.seed, args.init_range)
    (w, h), trace = solve(v, w0, h0, config)
    report = kkt_residual(v, w, h)

    texts = [(args.output_w, format_matrix(w, args.output_w.lower().endswith(".mtx"))),
             (args.output_h, format_matrix(h, args.output_h.lower().endswith(".mtx")))]
    if args.trace:
        texts.append((args.trace, json.dumps([r._asdict() for r in trace], indent=1)))
    _write_all(texts)
    print(f"sweeps: {trace[-1].sweep}")
    print(f"objective: {report.objective!r}")
    print(f"delta_normalized: {report.delta_normalized!r}")
    return 0


def _write_all(texts):
    # Every file is staged before any is renamed into place.
    with ExitStack() as stack:
        for path, text in texts:
            stack.enter_context(atomic_write(path)).write(text)


def cmd_diagnose(args):
    v = _load(args.v, "V")
    w = _load(args.w, "W")
    h = _load(args.h, "H")
    try:
        check_shapes(v, w, h)
    except DimensionError as exc:
        raise InputError(str(exc)) from None
    if (w < 0).any() or (h < 0).any():
        raise InputError("W and H must be nonnegative")
    print(json.dumps(kkt_residual(v, w, h)._asdict()))
    return 0


def cmd_benchmark(args, parser):
    if args.experiment == "one" and args.trials is not None:
        parser.error("--trials applies to experiment two only")
    init = args.init_range or ((0.0, 5.0) if args.experiment == "one" else (0.0, 1.0))
    try:
        scale = InstanceSpec(args.n, args.m, args.rank, args.v_range, init, init, args.seed)
        budgets = BudgetedRun("additive", args.budget_mode, args.checkpoints)
    except ConfigError as exc:
        parser.error(str(exc))
    config = SolverConfig(refresh_interval=args.refresh_interval, seed=args.seed)
    if args.experiment == "one":
        rows = experiment_one(scale, budgets, config)
    else:
        rows = experiment_two(scale, budgets, args.trials or 5, config)
    with atomic_write(args.out) as fh:
        table_to_csv(rows, fh)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "factorize":
            return cmd_factorize(args)
        if args.command == "diagnose":
            return cmd_diagnose(args)
        return cmd_benchmark(args, args.subparser)
    except (InputError, ConfigError, DimensionError) as exc:
        print(f"addnmf: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"addnmf: internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
