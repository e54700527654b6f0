"""
Metrics collection for solver runs.

This module provides:
- SpaceMeter, the working-space accountant every solver charges its live
  state to (machine words, input and output excluded)
- Solver timing and verdict counters aggregated across a bench or verify run
- Performance profiling hooks
"""

import threading
import time
from collections import defaultdict
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import UTC, datetime
from typing import Any

import structlog

from .config import get_settings
from .domain.exceptions import SolverInvariantError
from .domain.models import Answer, SpaceSnapshot


logger = structlog.get_logger(__name__)


# =============================================================================
# Space Meter
# =============================================================================


class SpaceMeter:
    """Live working-state accountant of a single solver invocation.

    Solvers call ``alloc``/``free`` (or the ``hold`` context manager) at the
    points where they create or drop state. ``peak_words`` never decreases.

    Example:
        >>> meter = SpaceMeter()
        >>> with meter.hold(8):
        ...     meter.current_words
        8
        >>> meter.peak_words, meter.current_words
        (8, 0)
    """

    __slots__ = ("current_words", "peak_words")

    def __init__(self) -> None:
        self.current_words = 0
        self.peak_words = 0

    def alloc(self, words: int) -> None:
        """Charge ``words`` of newly live state."""
        self.current_words += words
        if self.current_words > self.peak_words:
            self.peak_words = self.current_words

    def free(self, words: int) -> None:
        """Release ``words`` of state charged earlier."""
        if words > self.current_words:
            raise SolverInvariantError(
                f"meter underflow: freeing {words} words with {self.current_words} live"
            )
        self.current_words -= words

    @contextmanager
    def hold(self, words: int) -> Iterator[None]:
        """Charge ``words`` for the duration of the block."""
        self.alloc(words)
        try:
            yield
        finally:
            self.free(words)

    def snapshot(self) -> SpaceSnapshot:
        """Freeze the current reading."""
        return SpaceSnapshot(current_words=self.current_words, peak_words=self.peak_words)


# =============================================================================
# Metric Data Classes
# =============================================================================


@dataclass
class TimingMetric:
    """Timing metric for measuring solver duration."""

    count: int = 0
    total_seconds: float = 0.0
    min_seconds: float = float("inf")
    max_seconds: float = 0.0

    @property
    def average_seconds(self) -> float:
        """Average duration in seconds."""
        if self.count == 0:
            return 0.0
        return self.total_seconds / self.count

    @property
    def average_ms(self) -> float:
        """Average duration in milliseconds."""
        return self.average_seconds * 1000.0

    def record(self, duration_seconds: float) -> None:
        """Record a new timing measurement.

        Args:
            duration_seconds: Duration to record in seconds
        """
        self.count += 1
        self.total_seconds += duration_seconds
        self.min_seconds = min(self.min_seconds, duration_seconds)
        self.max_seconds = max(self.max_seconds, duration_seconds)

    def to_dict(self) -> dict[str, float]:
        """Convert to dictionary for JSON serialization."""
        return {
            "count": self.count,
            "total_seconds": round(self.total_seconds, 3),
            "average_ms": round(self.average_ms, 2),
            "min_ms": round(self.min_seconds * 1000, 2) if self.count else 0.0,
            "max_ms": round(self.max_seconds * 1000, 2),
        }


@dataclass
class CounterMetric:
    """Counter metric for tracking occurrences."""

    count: int = 0

    def increment(self, amount: int = 1) -> None:
        """Increment the counter by ``amount``."""
        self.count += amount

    def to_dict(self) -> dict[str, int]:
        """Convert to dictionary for JSON serialization."""
        return {"count": self.count}


@dataclass
class DetectionMetric:
    """Verdict tally of one solver against the oracle.

    ``detected`` counts YES answers on YES instances, ``breaches`` counts YES
    answers on NO instances.
    """

    yes_instances: int = 0
    detected: int = 0
    no_instances: int = 0
    breaches: int = 0

    @property
    def detection_rate(self) -> float:
        """Fraction of YES instances answered YES (1.0 when there were none)."""
        if self.yes_instances == 0:
            return 1.0
        return self.detected / self.yes_instances

    def record(self, truth: Answer, answer: Answer) -> None:
        """Record one verdict against its ground truth."""
        if truth is Answer.YES:
            self.yes_instances += 1
            if answer is Answer.YES:
                self.detected += 1
        else:
            self.no_instances += 1
            if answer is Answer.YES:
                self.breaches += 1

    def to_dict(self) -> dict[str, float]:
        """Convert to dictionary for JSON serialization."""
        return {
            "yes_instances": self.yes_instances,
            "detected": self.detected,
            "no_instances": self.no_instances,
            "breaches": self.breaches,
            "detection_rate": round(self.detection_rate, 4),
        }


# =============================================================================
# Metrics Collector
# =============================================================================


class MetricsCollector:
    """Aggregates solver timings, verdict tallies and counters.

    Thread-safe; bench workers share one collector.

    Example:
        >>> collector = MetricsCollector()
        >>> with collector.time_solver("det-star"):
        ...     pass
        >>> collector.record_verdict("det-star", Answer.YES, Answer.YES)
    """

    def __init__(self) -> None:
        """Initialize the metrics collector."""
        self._lock = threading.Lock()
        self.solver_timing: dict[str, TimingMetric] = defaultdict(TimingMetric)
        self.detection: dict[str, DetectionMetric] = defaultdict(DetectionMetric)
        self.counters: dict[str, CounterMetric] = defaultdict(CounterMetric)
        self.startup_time = datetime.now(UTC)

    @contextmanager
    def time_solver(self, solver_name: str) -> Iterator[None]:
        """Time a solver invocation.

        Args:
            solver_name: Algorithm name
        """
        if not get_settings().enable_metrics:
            yield
            return

        start_time = time.perf_counter()
        try:
            yield
        finally:
            duration = time.perf_counter() - start_time
            with self._lock:
                self.solver_timing[solver_name].record(duration)

            logger.debug(
                "solver_timed",
                solver=solver_name,
                duration_ms=round(duration * 1000, 2),
            )

    def record_verdict(self, solver_name: str, truth: Answer, answer: Answer) -> None:
        """Record a verdict against the oracle's answer.

        Args:
            solver_name: Algorithm name
            truth: Oracle answer
            answer: Solver answer
        """
        if not get_settings().enable_metrics:
            return

        with self._lock:
            self.detection[solver_name].record(truth, answer)

        if truth is Answer.NO and answer is Answer.YES:
            logger.warning("one_sidedness_breach", solver=solver_name)

    def increment_counter(self, name: str, amount: int = 1) -> None:
        """Increment a named counter.

        Args:
            name: Counter name
            amount: Amount to increment by (default: 1)
        """
        if not get_settings().enable_metrics:
            return

        with self._lock:
            self.counters[name].increment(amount)

    def get_metrics(self) -> dict[str, Any]:
        """Get all collected metrics as a dictionary."""
        uptime = datetime.now(UTC) - self.startup_time
        with self._lock:
            return {
                "uptime_seconds": uptime.total_seconds(),
                "timing": {name: m.to_dict() for name, m in self.solver_timing.items()},
                "detection": {name: m.to_dict() for name, m in self.detection.items()},
                "counters": {name: m.to_dict() for name, m in self.counters.items()},
            }

    def reset(self) -> None:
        """Reset all metrics to zero."""
        with self._lock:
            self.solver_timing.clear()
            self.detection.clear()
            self.counters.clear()
            self.startup_time = datetime.now(UTC)

        logger.debug("metrics_reset")


# =============================================================================
# Global Metrics Collector
# =============================================================================

_global_collector: MetricsCollector | None = None


def get_metrics_collector() -> MetricsCollector:
    """Get the global metrics collector, creating it on first access."""
    global _global_collector
    if _global_collector is None:
        _global_collector = MetricsCollector()
    return _global_collector


def reset_metrics() -> None:
    """Reset the global metrics collector."""
    get_metrics_collector().reset()


# =============================================================================
# Performance Profiling
# =============================================================================


@contextmanager
def profile_operation(
    operation_name: str,
    log_threshold_ms: float = 1000.0,
) -> Iterator[None]:
    """Profile a block and log a warning when it exceeds the threshold.

    Args:
        operation_name: Name of the operation being profiled
        log_threshold_ms: Log a warning if the block takes longer (ms)

    Example:
        >>> with profile_operation("multipoint_eval", log_threshold_ms=50):
        ...     values = multipoint_eval(f, points)
    """
    start_time = time.perf_counter()
    try:
        yield
    finally:
        duration_ms = (time.perf_counter() - start_time) * 1000
        get_metrics_collector().increment_counter(f"profiled:{operation_name}")
        if duration_ms > log_threshold_ms:
            logger.warning(
                "slow_operation_detected",
                operation=operation_name,
                duration_ms=round(duration_ms, 2),
                threshold_ms=log_threshold_ms,
            )
