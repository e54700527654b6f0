"""
Shared plumbing for solver services: solver context, timing, meter and the
SolveOutcome every service returns.
"""

import time
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any

from ..domain.exceptions import SolverInvariantError
from ..domain.models import Answer, SolveOutcome, SubsetSumInstance
from ..logging import LogContext, get_logger
from ..metrics import SpaceMeter, get_metrics_collector


logger = get_logger(__name__)


class SolverRun:
    """One metered solver invocation.

    Attributes:
        algo: Algorithm name
        inst: Instance being solved (already normalized)
        meter: Space meter charged by the solver
    """

    def __init__(self, algo: str, inst: SubsetSumInstance):
        self.algo = algo
        self.inst = inst
        self.meter = SpaceMeter()
        self._start_ns = time.perf_counter_ns()

    def finish(self, answer: Answer, random_bits_used: int = 0, **fields: Any) -> SolveOutcome:
        """
        Package the outcome.

        Raises:
            SolverInvariantError: If the solver left words charged on the meter
        """
        if self.meter.current_words != 0:
            raise SolverInvariantError(
                f"{self.algo} leaked {self.meter.current_words} words on the space meter"
            )
        elapsed = (time.perf_counter_ns() - self._start_ns) // 1000
        outcome = SolveOutcome(
            algo=self.algo,
            answer=answer,
            n=self.inst.n,
            t=self.inst.target,
            random_bits_used=random_bits_used,
            space=self.meter.snapshot(),
            wall_time_micros=elapsed,
            **fields,
        )
        logger.info(
            "solve_completed",
            algo=self.algo,
            answer=answer.value,
            peak_words=outcome.space.peak_words,
            random_bits_used=random_bits_used,
            wall_time_micros=elapsed,
        )
        return outcome


@contextmanager
def solver_run(algo: str, inst: SubsetSumInstance) -> Iterator[SolverRun]:
    """
    Open a metered run inside a LogContext naming the solver.

    A run ID is generated when none is active. Failures are logged as
    ``solve_failed`` and re-raised.
    """
    with LogContext(solver=algo):
        logger.info("solve_started", algo=algo, n=inst.n, t=inst.target)
        try:
            with get_metrics_collector().time_solver(algo):
                yield SolverRun(algo, inst)
        except Exception as e:
            logger.exception("solve_failed", algo=algo, error=str(e), error_type=type(e).__name__)
            raise
