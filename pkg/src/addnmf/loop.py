"""Generic outer loop shared by all solvers.

A stepper exposes ``v``, ``w``, ``h``, ``sweeps``, ``step()`` and
``objective()``; :func:`run_stepper` drives it under a :class:`SolverConfig`.
Trace records evaluate the objective with :func:`objective_accurate` rather
than trusting the stepper's running value, so traces from different
algorithms are comparable and monotone decrease is observable down to the
last bit.
"""
import time

from .config import TraceRecord
from .kkt import normalized_kkt
from .matrix import objective_accurate


def sample(stepper, start):
    return TraceRecord(
        sweep=stepper.sweeps,
        elapsed_seconds=time.perf_counter() - start,
        objective=objective_accurate(stepper.v, stepper.w, stepper.h),
        delta_normalized=normalized_kkt(stepper.v, stepper.w, stepper.h),
    )


def run_stepper(stepper, config, start=None):
    """Step until a stopping rule fires; return the trace.

    `start` is a ``time.perf_counter()`` reading taken before the stepper was
    built, so setup cost counts against the time budget.
    """
    if start is None:
        start = time.perf_counter()
    rec = sample(stepper, start)
    trace = [rec]
    if rec.delta_normalized <= config.tol_delta:
        return trace
    f_prev = stepper.objective()
    while True:
        stepper.step()
        k = stepper.sweeps
        f = stepper.objective()
        done = k >= config.max_sweeps
        if config.time_budget_seconds is not None:
            done |= time.perf_counter() - start >= config.time_budget_seconds
        if config.tol_f > 0.0:
            done |= (f_prev - f) < config.tol_f * f_prev
        f_prev = f
        if done or k % config.trace_every == 0:
            rec = sample(stepper, start)
            trace.append(rec)
            done |= rec.delta_normalized <= config.tol_delta
        if done:
            return trace
