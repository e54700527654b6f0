"""
Tests for structured logging functionality.

This module tests the logging configuration, context management,
and run ID tracking.
"""

import uuid

from solvers.lowspace_subset_sum.logging import (
    LogContext,
    add_run_id,
    add_solver_context,
    clear_context,
    generate_run_id,
    get_logger,
    get_processors,
    get_run_id,
    get_solver_context,
    set_run_id,
    set_solver_context,
)


class TestRunID:
    """Test run ID generation and management."""

    def test_generate_run_id(self):
        """Test that run IDs are valid UUIDs."""
        run_id = generate_run_id()

        assert isinstance(run_id, str)
        uuid.UUID(run_id)

    def test_set_and_get_run_id(self):
        """Test setting and retrieving the run ID."""
        clear_context()

        set_run_id("bench-42")

        assert get_run_id() == "bench-42"

    def test_set_run_id_generates_if_none(self):
        """Test that set_run_id generates an ID if none is provided."""
        clear_context()

        run_id = set_run_id(None)

        assert get_run_id() == run_id
        uuid.UUID(run_id)


class TestSolverContext:
    """Test solver context management."""

    def test_set_and_get_solver_context(self):
        """Test setting and retrieving the solver context."""
        clear_context()

        set_solver_context("det-star")

        assert get_solver_context() == "det-star"


class TestProcessors:
    """Test the context-injecting processors."""

    def test_run_id_injected(self):
        """Test that the run ID processor adds the active run ID."""
        clear_context()
        set_run_id("run-7")

        event = add_run_id(None, "info", {"event": "solve_started"})  # type: ignore[arg-type]

        assert event["run_id"] == "run-7"

    def test_solver_injected_only_when_set(self):
        """Test that the solver processor leaves events untouched without a solver."""
        clear_context()

        event = add_solver_context(None, "info", {"event": "x"})  # type: ignore[arg-type]
        assert "solver" not in event

        set_solver_context("tradeoff")
        event = add_solver_context(None, "info", {"event": "x"})  # type: ignore[arg-type]
        assert event["solver"] == "tradeoff"

    def test_processor_chain_ends_with_renderer(self):
        """Test that the configured chain carries the context processors first."""
        processors = get_processors()

        assert processors[0] is add_run_id
        assert processors[1] is add_solver_context
        assert callable(processors[-1])


class TestLogContext:
    """Test LogContext context manager."""

    def test_log_context_sets_run_id(self):
        """Test that LogContext sets the run ID."""
        clear_context()

        with LogContext(run_id="context-123"):
            assert get_run_id() == "context-123"

    def test_log_context_generates_run_id_if_none(self):
        """Test that LogContext generates a run ID when none is active."""
        clear_context()

        with LogContext():
            run_id = get_run_id()
            assert run_id is not None
            uuid.UUID(run_id)

    def test_log_context_keeps_active_run_id(self):
        """Test that LogContext without a run ID keeps the active one."""
        clear_context()
        set_run_id("outer")

        with LogContext(solver="bellman"):
            assert get_run_id() == "outer"

    def test_log_context_sets_solver(self):
        """Test that LogContext sets the solver context."""
        clear_context()

        with LogContext(solver="rand-loglog"):
            assert get_solver_context() == "rand-loglog"

    def test_log_context_restores_previous_values(self):
        """Test that LogContext restores previous context on exit."""
        clear_context()
        set_run_id("initial-run")
        set_solver_context("initial-solver")

        with LogContext(run_id="temp-run", solver="temp-solver"):
            assert get_run_id() == "temp-run"
            assert get_solver_context() == "temp-solver"

        assert get_run_id() == "initial-run"
        assert get_solver_context() == "initial-solver"

    def test_log_context_nested(self):
        """Test nested LogContext managers."""
        clear_context()

        with LogContext(run_id="outer-123"):
            with LogContext(run_id="inner-456"):
                assert get_run_id() == "inner-456"

            assert get_run_id() == "outer-123"


class TestLogger:
    """Test logger functionality."""

    def test_get_logger_returns_bound_logger(self):
        """Test that get_logger returns a logger with the standard methods."""
        logger = get_logger(__name__)

        assert callable(logger.info)
        assert callable(logger.debug)
        assert callable(logger.warning)
        assert callable(logger.error)

    def test_get_logger_without_name(self):
        """Test that get_logger works without a name parameter."""
        logger = get_logger()

        assert callable(logger.info)

    def test_logger_with_context_manager(self):
        """Test logging inside a LogContext does not raise."""
        clear_context()
        logger = get_logger(__name__)

        with LogContext(run_id="context-123", solver="det-star"):
            logger.info("solve_started", n=3, t=12)


class TestClearContext:
    """Test context clearing functionality."""

    def test_clear_context_removes_all_values(self):
        """Test that clear_context removes all context variables."""
        set_run_id("test-123")
        set_solver_context("bellman")

        clear_context()

        assert get_run_id() is None
        assert get_solver_context() is None
