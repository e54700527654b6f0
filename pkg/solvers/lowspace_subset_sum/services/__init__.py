"""
Solver services.

Each service turns an instance into a metered SolveOutcome. The randomized
services take every random bit from an injected BitSource, so a run is
reproducible from its seed.
"""

from .approximation_service import ApproximationService, round_alg1, round_alg2
from .baseline_solver_service import BellmanSolverService, KaneSolverService
from .deterministic_solver_service import DeterministicSolverService
from .randomized_solver_service import RandomizedSolverService
from .tradeoff_solver_service import TradeoffSolverService


__all__ = [
    "ApproximationService",
    "BellmanSolverService",
    "DeterministicSolverService",
    "KaneSolverService",
    "RandomizedSolverService",
    "TradeoffSolverService",
    "round_alg1",
    "round_alg2",
]
