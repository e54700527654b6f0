"""Domain models, protocols and exceptions for the solver suite."""

from .exceptions import (
    ArgumentError,
    DeciderFaultError,
    FieldDomainError,
    InstanceParseError,
    SolverInvariantError,
    SubsetSumError,
    UnsupportedError,
)
from .models import (
    Answer,
    CoeffQuery,
    HashMode,
    RandConfig,
    RoundedInstance,
    SolveOutcome,
    SpaceSnapshot,
    SubsetSumInstance,
    WssapQuery,
)
from .protocols import BitSource, Decider, SolverService


__all__ = [
    "Answer",
    "ArgumentError",
    "BitSource",
    "CoeffQuery",
    "Decider",
    "DeciderFaultError",
    "FieldDomainError",
    "HashMode",
    "InstanceParseError",
    "RandConfig",
    "RoundedInstance",
    "SolveOutcome",
    "SolverInvariantError",
    "SolverService",
    "SpaceSnapshot",
    "SubsetSumError",
    "SubsetSumInstance",
    "UnsupportedError",
    "WssapQuery",
]
