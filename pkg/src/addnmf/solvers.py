"""Algorithm dispatch by name."""
from .additive import AdditiveStepper, solve_additive
from .baselines import GzStepper, LsStepper, solve_gz, solve_ls
from .config import ALGORITHMS, ConfigError, SolverConfig
from .matrix import DimensionError

_SOLVERS = {"additive": solve_additive, "ls": solve_ls, "gz": solve_gz}


def make_stepper(algorithm, v, w0, h0, config=None):
    config = config or SolverConfig()
    if algorithm == "additive":
        return AdditiveStepper(v, w0, h0, config.refresh_interval)
    if algorithm == "ls":
        return LsStepper(v, w0, h0)
    if algorithm == "gz":
        return GzStepper(v, w0, h0)
    raise ConfigError(f"unknown algorithm {algorithm!r}; "
                      f"expected one of {', '.join(ALGORITHMS)}")


def solve(v, w0, h0, config=None):
    """Factorize `v` from ``(w0, h0)`` with ``config.algorithm``.

    Returns ``(FactorPair, trace)``.
    """
    config = config or SolverConfig()
    if config.rank is not None and len(h0) != config.rank:
        raise DimensionError(f"H0 has {len(h0)} rows but rank is {config.rank}")
    return _SOLVERS[config.algorithm](v, w0, h0, config)
