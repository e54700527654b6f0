"""Protocol interfaces for dependency injection.

Solvers receive their randomness and report their verdicts through these
structural interfaces, which keeps the coefficient test independent of the
concrete generator and lets tests substitute scripted bit sources.
"""

from typing import Protocol, runtime_checkable

from .models import Answer, SolveOutcome, SubsetSumInstance


@runtime_checkable
class BitSource(Protocol):
    """Source of random bits with consumption accounting.

    Example:
        >>> tape: BitSource = RandomTape(seed=7)
        >>> tape.read_bits(12) < 2**12
        True
    """

    @property
    def bits_used(self) -> int:
        """Number of random bits consumed so far."""
        ...

    def read_bits(self, count: int) -> int:
        """Return ``count`` fresh random bits packed into an integer."""
        ...

    def draw_index(self, m: int) -> int:
        """Return a uniform index in [0, m), charging ceil(log2 m) bits."""
        ...


@runtime_checkable
class Decider(Protocol):
    """Any YES/NO Subset Sum decision procedure."""

    def __call__(self, inst: SubsetSumInstance) -> Answer:
        """Decide whether some subset of ``inst.items`` sums to ``inst.target``."""
        ...


@runtime_checkable
class SolverService(Protocol):
    """A solver that turns an instance into a metered outcome."""

    def solve(self, inst: SubsetSumInstance) -> SolveOutcome:
        """Solve ``inst`` and report the verdict with its resource readings.

        Raises:
            ArgumentError: If solver parameters do not fit the instance
        """
        ...
