"""
Structured logging configuration using structlog.

Every solver event carries the run ID of the invocation that produced it and
the name of the solver currently executing, so interleaved bench and verify
output can be separated after the fact. Logs go to stderr; stdout is reserved
for CSV rows.

Example:
    >>> from solvers.lowspace_subset_sum.logging import get_logger
    >>> logger = get_logger(__name__)
    >>> logger.info("solve_started", algo="det-star", n=3, t=12)
"""

import logging
import logging.handlers
import sys
import uuid
from contextvars import ContextVar
from pathlib import Path
from typing import Any

import structlog
from structlog.types import EventDict, Processor

from .config import get_settings


# =========================================================================
# Context Variables
# =========================================================================

# Run ID shared by every event of one CLI invocation or verify corpus
run_id_var: ContextVar[str | None] = ContextVar("run_id", default=None)

# Solver currently executing
solver_context_var: ContextVar[str | None] = ContextVar("solver_context", default=None)


def generate_run_id() -> str:
    """
    Generate a new run ID.

    Returns:
        UUID string
    """
    return str(uuid.uuid4())


def set_run_id(run_id: str | None = None) -> str:
    """
    Set the run ID for the current context.

    Args:
        run_id: Optional run ID. If None, generates a new one.

    Returns:
        The run ID that was set
    """
    if run_id is None:
        run_id = generate_run_id()
    run_id_var.set(run_id)
    return run_id


def get_run_id() -> str | None:
    """Get the current run ID, or None if not set."""
    return run_id_var.get()


def set_solver_context(solver_name: str) -> None:
    """
    Set the solver context for logging.

    Args:
        solver_name: Name of the solver currently executing
    """
    solver_context_var.set(solver_name)


def get_solver_context() -> str | None:
    """Get the current solver context, or None if not set."""
    return solver_context_var.get()


def clear_context() -> None:
    """Clear all context variables."""
    run_id_var.set(None)
    solver_context_var.set(None)


# =========================================================================
# Context Processors
# =========================================================================


def add_run_id(logger: logging.Logger, method_name: str, event_dict: EventDict) -> EventDict:
    """Inject the run ID from context into the event."""
    run_id = get_run_id()
    if run_id:
        event_dict["run_id"] = run_id
    return event_dict


def add_solver_context(
    logger: logging.Logger, method_name: str, event_dict: EventDict
) -> EventDict:
    """Inject the executing solver's name into the event."""
    solver = get_solver_context()
    if solver:
        event_dict["solver"] = solver
    return event_dict


def add_timestamp(logger: logging.Logger, method_name: str, event_dict: EventDict) -> EventDict:
    """Add an ISO 8601 UTC timestamp."""
    import datetime

    event_dict["timestamp"] = datetime.datetime.now(datetime.UTC).isoformat()
    return event_dict


# =========================================================================
# Logging Configuration
# =========================================================================


def configure_stdlib_logging() -> None:
    """
    Configure the root logger with a stderr handler and an optional rotating file.
    """
    settings = get_settings()
    root_logger = logging.getLogger()
    root_logger.setLevel(settings.get_logging_level())

    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(settings.get_logging_level())
    root_logger.addHandler(console_handler)

    if settings.log_file:
        log_path = Path(settings.log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.handlers.RotatingFileHandler(
            filename=settings.log_file,
            maxBytes=settings.log_max_bytes,
            backupCount=settings.log_backup_count,
            encoding="utf-8",
        )
        file_handler.setLevel(settings.get_logging_level())
        root_logger.addHandler(file_handler)


def get_processors() -> list[Processor]:
    """
    Get the list of structlog processors based on configuration.

    Returns:
        List of processors for structlog configuration
    """
    settings = get_settings()
    processors: list[Processor] = [
        add_run_id,
        add_solver_context,
        add_timestamp,
        structlog.stdlib.add_log_level,
        structlog.stdlib.add_logger_name,
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]

    if settings.log_format == "json":
        processors.append(structlog.processors.JSONRenderer())
    elif settings.log_format == "console":
        processors.append(
            structlog.dev.ConsoleRenderer(
                colors=False,
                exception_formatter=structlog.dev.plain_traceback,
            )
        )
    else:
        processors.append(structlog.processors.KeyValueRenderer())

    return processors


def configure_structlog() -> None:
    """Configure structlog to render through the stdlib root logger."""
    structlog.configure(
        processors=get_processors(),
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )


def setup_logging() -> None:
    """
    Initialize logging system.

    Called once on import; the CLI calls it again after applying ``--log-level``.
    """
    configure_stdlib_logging()
    configure_structlog()

    settings = get_settings()
    logger = get_logger(__name__)
    logger.debug(
        "logging_initialized",
        log_level=settings.log_level,
        log_format=settings.log_format,
    )


# =========================================================================
# Logger Factory
# =========================================================================


def get_logger(name: str | None = None) -> structlog.stdlib.BoundLogger:
    """
    Get a structured logger instance.

    Args:
        name: Logger name (typically __name__ of the calling module).

    Returns:
        Configured structlog logger
    """
    logger: structlog.stdlib.BoundLogger = structlog.get_logger(name)
    return logger


# =========================================================================
# Context Manager
# =========================================================================


class LogContext:
    """
    Context manager binding a run ID and solver name for a block of work.

    Example:
        >>> with LogContext(run_id="bench-1", solver="rand-loglog"):
        ...     logger.info("solve_started")  # carries run_id and solver
    """

    def __init__(
        self,
        run_id: str | None = None,
        solver: str | None = None,
        **extra_context: Any,
    ):
        """
        Initialize log context.

        Args:
            run_id: Run ID for the block; generated when absent and none is active
            solver: Solver name for the block
            **extra_context: Additional context fields kept for callers that bind them
        """
        self.run_id = run_id
        self.solver = solver
        self.extra_context = extra_context
        self._previous_run_id: str | None = None
        self._previous_solver: str | None = None

    def __enter__(self) -> "LogContext":
        """Save the active context and install this one."""
        self._previous_run_id = get_run_id()
        self._previous_solver = get_solver_context()

        if self.run_id:
            set_run_id(self.run_id)
        elif self._previous_run_id is None:
            set_run_id()

        if self.solver:
            set_solver_context(self.solver)

        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        """Restore the previous context."""
        run_id_var.set(self._previous_run_id)
        solver_context_var.set(self._previous_solver)


# =========================================================================
# Initialization
# =========================================================================

if get_settings().enable_structured_logging:
    setup_logging()
