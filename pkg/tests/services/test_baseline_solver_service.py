"""
Unit tests for the baseline solvers: the Bellman dynamic program and the
direct generating-function solver.
"""

import pytest

from solvers.lowspace_subset_sum.domain.exceptions import SolverInvariantError
from solvers.lowspace_subset_sum.domain.models import Answer, SubsetSumInstance
from solvers.lowspace_subset_sum.logging import (
    clear_context,
    get_run_id,
    get_solver_context,
    set_solver_context,
)
from solvers.lowspace_subset_sum.randomness import RandomTape
from solvers.lowspace_subset_sum.services.base import solver_run
from solvers.lowspace_subset_sum.services.baseline_solver_service import (
    BellmanSolverService,
    KaneSolverService,
)


# ============================================================================
# Fixtures
# ============================================================================


@pytest.fixture
def yes_instance() -> SubsetSumInstance:
    """3 + 7 = 12."""
    return SubsetSumInstance(items=(3, 5, 7), target=12)


@pytest.fixture
def no_instance() -> SubsetSumInstance:
    """No subset of 3, 5, 7 sums to 11."""
    return SubsetSumInstance(items=(3, 5, 7), target=11)


class TestSolverRun:
    """Test the shared run plumbing."""

    def test_leak_detected(self, yes_instance: SubsetSumInstance):
        """Test that words left on the meter fail the run."""
        with pytest.raises(SolverInvariantError, match="leaked"):
            with solver_run("bellman", yes_instance) as run:
                run.meter.alloc(3)
                run.finish(Answer.YES)

    def test_solver_context_restored(self, yes_instance: SubsetSumInstance):
        """Test that the solver context is set during the run and restored after."""
        set_solver_context("outer")

        with solver_run("bellman", yes_instance) as run:
            assert get_solver_context() == "bellman"
            run.finish(Answer.YES)

        assert get_solver_context() == "outer"

    def test_run_id_scoped_to_run(self, yes_instance: SubsetSumInstance):
        """Test that a run without an active run ID gets one only for its duration."""
        clear_context()

        with solver_run("bellman", yes_instance) as run:
            assert get_run_id() is not None
            run.finish(Answer.YES)

        assert get_run_id() is None


class TestBellmanSolverService:
    """Test the reference solver."""

    def test_yes(self, yes_instance: SubsetSumInstance):
        """Test a YES instance."""
        outcome = BellmanSolverService().solve(yes_instance)

        assert outcome.answer is Answer.YES
        assert outcome.algo == "bellman"
        assert outcome.random_bits_used == 0

    def test_no(self, no_instance: SubsetSumInstance):
        """Test a NO instance."""
        assert BellmanSolverService().solve(no_instance).answer is Answer.NO

    def test_space_is_table_words(self):
        """Test that the meter charges ceil((t+1)/64) words."""
        outcome = BellmanSolverService().solve(SubsetSumInstance(items=(1,), target=128))

        assert outcome.space.peak_words == 3
        assert outcome.space.current_words == 0

    def test_large_items_dropped(self):
        """Test that items above t are normalized away."""
        outcome = BellmanSolverService().solve(SubsetSumInstance(items=(50, 2), target=2))

        assert outcome.answer is Answer.YES
        assert outcome.n == 1

    def test_csv_row(self, yes_instance: SubsetSumInstance):
        """Test the CSV rendering with timing omitted."""
        row = BellmanSolverService().solve(yes_instance).csv_row(omit_timing=True)

        assert row == ["bellman", "3", "12", "", "", "YES", "0", "1", "0"]


class TestKaneSolverService:
    """Test the direct coefficient-test solver."""

    def test_deterministic(self, yes_instance: SubsetSumInstance, no_instance: SubsetSumInstance):
        """Test both answers with the exhaustive field scan."""
        solver = KaneSolverService()

        assert solver.algo == "kane-det"
        assert solver.solve(yes_instance).answer is Answer.YES
        assert solver.solve(no_instance).answer is Answer.NO

    def test_randomized_counts_bits(self, yes_instance: SubsetSumInstance):
        """Test that the randomized variant reports the bits it drew."""
        solver = KaneSolverService(tape=RandomTape(seed=3), prime_multiplier=4)

        outcome = solver.solve(yes_instance)

        assert outcome.algo == "kane-rand"
        assert outcome.answer is Answer.YES
        assert outcome.random_bits_used > 0

    def test_randomized_never_yes_on_no(self, no_instance: SubsetSumInstance):
        """Test one-sidedness across seeds."""
        for seed in range(10):
            solver = KaneSolverService(tape=RandomTape(seed=seed), prime_multiplier=4)

            assert solver.solve(no_instance).answer is Answer.NO

    def test_empty_instance(self):
        """Test that no items answer NO."""
        outcome = KaneSolverService().solve(SubsetSumInstance(items=(), target=4))

        assert outcome.answer is Answer.NO
