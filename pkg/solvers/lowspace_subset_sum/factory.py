"""
Solver Factory - algorithm dispatch and dependency wiring.

Maps the algorithm names used on the command line to fully configured solver
services. Every randomized solver gets its own RandomTape stream derived from
the master seed, so runs are reproducible and solvers never share bits.
"""

from .domain.exceptions import ArgumentError, UnsupportedError
from .domain.models import (
    Answer,
    HashMode,
    RandConfig,
    SolveOutcome,
    SubsetSumInstance,
    WssapQuery,
)
from .domain.protocols import BitSource, Decider, SolverService
from .logging import get_logger
from .randomness import RandomTape
from .services.approximation_service import ApproximationService
from .services.baseline_solver_service import BellmanSolverService, KaneSolverService
from .services.deterministic_solver_service import DeterministicSolverService
from .services.randomized_solver_service import RandomizedSolverService
from .services.tradeoff_solver_service import TradeoffSolverService


logger = get_logger(__name__)

ALGORITHMS = (
    "bellman",
    "kane-det",
    "kane-rand",
    "rand-loglog",
    "rand-eps",
    "det-star",
    "tradeoff",
    "wssap",
)

RANDOMIZED = frozenset({"kane-rand", "rand-loglog", "rand-eps", "tradeoff", "wssap"})


class WssapSolver:
    """ApproximationService bound to one eps, usable as a plain SolverService."""

    def __init__(self, service: ApproximationService, eps_num: int, eps_den: int):
        self.service = service
        self.eps_num = eps_num
        self.eps_den = eps_den

    def solve(self, inst: SubsetSumInstance) -> SolveOutcome:
        query = WssapQuery(inst=inst, eps_num=self.eps_num, eps_den=self.eps_den)
        return self.service.solve(query)


class SolverFactory:
    """
    Factory for solver services keyed by algorithm name.

    Example:
        >>> factory = SolverFactory(seed=42)
        >>> inst = SubsetSumInstance(items=(3, 5, 7), target=12)
        >>> factory.create_solver("det-star").solve(inst).answer
        <Answer.YES: 'YES'>

    Example (Testing):
        >>> factory = SolverFactory(rand_config=RandConfig(load_param=2))
        >>> solver = factory.create_solver("rand-loglog", tape=RandomTape(seed=1))
    """

    def __init__(
        self,
        seed: int = 0,
        k: int | None = None,
        eps: tuple[int, int] | None = None,
        rand_config: RandConfig | None = None,
        race: bool = False,
    ):
        """
        Initialize the factory.

        Args:
            seed: 64-bit master seed for every randomized solver
            k: Tradeoff parameter (tradeoff only)
            eps: eps as (num, den) (wssap only)
            rand_config: Pipeline configuration for the randomized solvers
            race: Run both weak-approximation reductions concurrently

        Raises:
            ArgumentError: If the seed does not fit in 64 bits
        """
        if not 0 <= seed < 1 << 64:
            raise ArgumentError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.k = k
        self.eps = eps
        self.rand_config = rand_config
        self.race = race
        logger.debug("solver_factory_initialized", seed=seed, k=k, eps=eps, race=race)

    def _validate(self, algo: str) -> None:
        errors: list[str] = []
        if algo not in ALGORITHMS:
            errors.append(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}")
        if algo == "tradeoff" and self.k is None:
            errors.append("tradeoff needs --k")
        if algo == "wssap" and self.eps is None:
            errors.append("wssap needs --eps num/den")
        if errors:
            logger.error("configuration_validation_failed", algo=algo, errors=errors)
            raise ArgumentError("; ".join(errors))

    def tape_for(self, algo: str, stream: int = 0) -> RandomTape:
        """Tape for one algorithm; ``stream`` separates corpus entries and bench cells."""
        offset = ALGORITHMS.index(algo) if algo in ALGORITHMS else len(ALGORITHMS)
        return RandomTape.for_stream(self.seed, (stream * len(ALGORITHMS) + offset) % (1 << 64))

    def _rand_config(self, mode: HashMode) -> RandConfig:
        base = self.rand_config or RandConfig()
        return base.model_copy(update={"family_mode": mode})

    def create_solver(
        self,
        algo: str,
        stream: int = 0,
        tape: BitSource | None = None,
    ) -> SolverService:
        """
        Create the service for ``algo``.

        Args:
            algo: One of ALGORITHMS
            stream: Tape stream id
            tape: Bit source override (tests)

        Raises:
            ArgumentError: For an unknown algorithm or a missing parameter
        """
        self._validate(algo)
        source = tape if tape is not None else self.tape_for(algo, stream)

        match algo:
            case "bellman":
                return BellmanSolverService()
            case "kane-det":
                return KaneSolverService()
            case "kane-rand":
                return KaneSolverService(tape=source)
            case "rand-loglog":
                return RandomizedSolverService(source, self._rand_config(HashMode.LOGLOG))
            case "rand-eps":
                return RandomizedSolverService(source, self._rand_config(HashMode.CONST))
            case "det-star":
                return DeterministicSolverService()
            case "tradeoff":
                assert self.k is not None
                return TradeoffSolverService(source, self.k, self.rand_config)
            case "wssap":
                assert self.eps is not None
                service = ApproximationService(source, self.rand_config, race=self.race)
                return WssapSolver(service, *self.eps)
        raise UnsupportedError(f"no service for {algo!r}")

    def create_decider(self, algo: str, stream: int = 0) -> Decider:
        """
        A Decider running ``algo``; every call draws from the same tape.

        Witness reconstruction feeds the decider shrinking suffix instances,
        so the tradeoff decider clamps k to min(n, t) of each call.

        Raises:
            UnsupportedError: For wssap, which does not decide exact Subset Sum
        """
        if algo == "wssap":
            raise UnsupportedError("weak approximation is not an exact decider")
        solver = self.create_solver(algo, stream)

        if isinstance(solver, TradeoffSolverService):
            tradeoff = solver

            def decide_clamped(inst: SubsetSumInstance) -> Answer:
                k = min(tradeoff.k, max(1, min(inst.n, inst.target)))
                return TradeoffSolverService(tradeoff.tape, k, tradeoff.config).solve(inst).answer

            return decide_clamped

        def decide(inst: SubsetSumInstance) -> Answer:
            return solver.solve(inst).answer

        return decide
