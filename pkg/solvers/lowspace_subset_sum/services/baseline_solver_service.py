"""
Baseline solvers: Bellman's bitset dynamic program and the direct
generating-function solver that runs the coefficient test on
prod (1 + x^a_i) without any partitioning.
"""

from ..coefficient_test import (
    coeff_test_deterministic,
    coeff_test_randomized,
    product_evaluator,
)
from ..domain.models import CoeffQuery, SolveOutcome, SubsetSumInstance
from ..domain.protocols import BitSource
from ..instances import dp_oracle
from ..logging import get_logger
from .base import solver_run


logger = get_logger(__name__)

_WORD = 64


class BellmanSolverService:
    """Reference solver; its meter charges the full t+1 bit table."""

    algo = "bellman"

    def solve(self, inst: SubsetSumInstance) -> SolveOutcome:
        inst = inst.normalized()
        with solver_run(self.algo, inst) as run:
            with run.meter.hold(-(-(inst.target + 1) // _WORD)):
                answer = dp_oracle(inst)
            return run.finish(answer)


class KaneSolverService:
    """
    Coefficient test applied directly to prod (1 + x^a_i).

    Deterministic by default; with a tape it draws a single field instead of
    trying all of them.

    Example:
        >>> KaneSolverService().solve(SubsetSumInstance(items=(3, 5, 7), target=12)).answer
        <Answer.YES: 'YES'>
    """

    def __init__(self, tape: BitSource | None = None, prime_multiplier: int | None = None):
        """
        Initialize the solver.

        Args:
            tape: Bit source; None selects the deterministic test
            prime_multiplier: Override for the prime-list multiplier
        """
        self.tape = tape
        self.prime_multiplier = prime_multiplier
        self.algo = "kane-det" if tape is None else "kane-rand"

    def solve(self, inst: SubsetSumInstance) -> SolveOutcome:
        inst = inst.normalized()
        with solver_run(self.algo, inst) as run:
            ev = product_evaluator(inst.items, degree=max(inst.target, sum(inst.items)))
            query = CoeffQuery.point(inst.target)
            if self.tape is None:
                answer = coeff_test_deterministic(ev, query, self.prime_multiplier, run.meter)
                return run.finish(answer)

            before = self.tape.bits_used
            answer = coeff_test_randomized(ev, query, self.tape, self.prime_multiplier, run.meter)
            return run.finish(answer, random_bits_used=self.tape.bits_used - before)
