"""
Low-space Subset Sum solvers.

Pseudopolynomial deciders that work in polylogarithmic space by testing a
single coefficient of a subset-sum generating function over small finite
fields, plus the Bellman baseline, a time-space tradeoff solver and a weak
approximation decider.
"""

from .domain import (
    Answer,
    ArgumentError,
    CoeffQuery,
    RandConfig,
    SolveOutcome,
    SubsetSumError,
    SubsetSumInstance,
    WssapQuery,
)
from .factory import ALGORITHMS, SolverFactory
from .instances import dp_oracle, parse_instance, read_instance, reconstruct_solution
from .randomness import RandomTape


__all__ = [
    "ALGORITHMS",
    "Answer",
    "ArgumentError",
    "CoeffQuery",
    "RandConfig",
    "RandomTape",
    "SolveOutcome",
    "SolverFactory",
    "SubsetSumError",
    "SubsetSumInstance",
    "WssapQuery",
    "dp_oracle",
    "parse_instance",
    "read_instance",
    "reconstruct_solution",
]
