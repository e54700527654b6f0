"""
Weak approximation.

Distinguishes "some subset sums into [(1 - eps/2)t, t]" from "no subset sums
into [(1 - eps)t, (1 + eps)t]" by rounding the items to a small scale and
asking the randomized pipeline whether any coefficient in a target window is
nonzero. Two roundings are available:

- ALG1 divides every item by N = eps t / (2n), target window ~ [2n(1-eps)/eps, 2n/eps]
- ALG2 keeps only items above eps t, divides them by N = eps^2 t / 8 and
  lowers the window by the small-item sum h

All rounding is exact integer floor/ceil arithmetic on eps = num/den.
"""

from concurrent.futures import FIRST_COMPLETED, Future, ThreadPoolExecutor, wait
from fractions import Fraction
from threading import Event

from ..domain.exceptions import ArgumentError
from ..domain.models import (
    Answer,
    CoeffQuery,
    RandConfig,
    RoundedInstance,
    SolveOutcome,
    SubsetSumInstance,
    WssapQuery,
)
from ..domain.protocols import BitSource
from ..instances import dp_oracle_range
from ..logging import get_logger
from ..metrics import SpaceMeter
from ..randomness import RandomTape
from .base import solver_run
from .randomized_solver_service import RandomizedSolverService


logger = get_logger(__name__)

# Below this many items ALG1 decides its rounded window with the dynamic program.
ALG1_MIN_ITEMS = 4


def _floor(value: Fraction) -> int:
    return value.numerator // value.denominator


def _ceil(value: Fraction) -> int:
    return -(-value.numerator // value.denominator)


def round_alg1(query: WssapQuery) -> RoundedInstance:
    """
    Global rounding by N = eps t / (2n).

    b_i = floor(a_i / N) and the window is [ceil(2n(1-eps)/eps), floor(2n/eps)];
    a subset of the b_i lands in it iff N times its sum lies in [(1-eps)t, t].

    Raises:
        ArgumentError: If the instance has no items left after normalization

    Example:
        >>> q = WssapQuery(inst=SubsetSumInstance(items=(25,), target=100), eps_num=1, eps_den=2)
        >>> round_alg1(q).t_prime
        4
    """
    inst = query.inst.normalized()
    n = inst.n
    if n == 0:
        raise ArgumentError("rounding needs at least one item")
    num, den, t = query.eps_num, query.eps_den, inst.target

    scale = Fraction(num * t, 2 * n * den)
    items = tuple(b for b in (_floor(a / scale) for a in inst.items) if b > 0)
    t_prime = Fraction(2 * n * den, num)
    return RoundedInstance(
        items=items,
        lo=_ceil(t_prime * (1 - query.eps)),
        hi=_floor(t_prime),
        provenance="ALG1",
        scale_num=scale.numerator,
        scale_den=scale.denominator,
        t_prime=_ceil(t_prime),
    )


def round_alg2(query: WssapQuery) -> RoundedInstance:
    """
    Big/small split with N = eps^2 t / 8.

    Items a_i <= eps t are small and only contribute their sum h. Big items
    are rounded by N and the window is [(t(1-eps) - h)/N, t(1+eps/2)/N],
    lower end clamped at 0; when h alone reaches (1-eps)t the instance is an
    immediate YES.

    Raises:
        ArgumentError: If the instance has no items left after normalization
    """
    inst = query.inst.normalized()
    if inst.n == 0:
        raise ArgumentError("rounding needs at least one item")
    eps, t = query.eps, inst.target

    big = [a for a in inst.items if a > eps * t]
    small_sum = sum(inst.items) - sum(big)
    scale = eps * eps * t / 8

    floor_gap = t * (1 - eps) - small_sum
    immediate = floor_gap <= 0
    lo = 0 if immediate else _ceil(floor_gap / scale)
    return RoundedInstance(
        items=tuple(b for b in (_floor(a / scale) for a in big) if b > 0),
        lo=lo,
        hi=_floor(t * (1 + eps / 2) / scale),
        provenance="ALG2",
        scale_num=scale.numerator,
        scale_den=scale.denominator,
        small_sum=small_sum,
        immediate_yes=immediate,
    )


def decide_rounded(
    rounded: RoundedInstance,
    tape: BitSource,
    config: RandConfig | None = None,
    meter: SpaceMeter | None = None,
    cancel: Event | None = None,
) -> Answer:
    """
    Is some subset sum of the rounded items inside [lo, hi]?

    Uses the randomized pipeline with a RANGE query, except for the trivial
    cases and small ALG1 instances, which go to the dynamic program. A set
    ``cancel`` event stops the pipeline with RunCancelledError.
    """
    if rounded.immediate_yes or rounded.lo == 0:
        return Answer.YES
    if not rounded.items:
        return Answer.NO

    inst = SubsetSumInstance(items=rounded.items, target=rounded.hi)
    if rounded.provenance == "ALG1" and len(rounded.items) < ALG1_MIN_ITEMS:
        return dp_oracle_range(inst, rounded.lo, rounded.hi)

    solver = RandomizedSolverService(tape, config)
    return solver.decide(inst, CoeffQuery.range(rounded.lo, rounded.hi), meter, cancel)


class ApproximationService:
    """
    Weak-approximation decider.

    By default only ALG1 runs, so results are reproducible from the seed. In
    race mode both reductions run in a thread pool and the first to finish
    answers. Each side then draws from its own tape seeded off the main one, and
    the loser is cancelled and joined before the answer is returned.
    """

    algo = "wssap"

    def __init__(self, tape: BitSource, config: RandConfig | None = None, race: bool = False):
        self.tape = tape
        self.config = config
        self.race = race

    def _race(self, query: WssapQuery, meter: SpaceMeter) -> Answer:
        tapes = {side: RandomTape(self.tape.read_bits(64)) for side in ("ALG1", "ALG2")}
        meters = {"ALG1": SpaceMeter(), "ALG2": SpaceMeter()}
        rounded = {"ALG1": round_alg1(query), "ALG2": round_alg2(query)}
        cancel = Event()
        executor = ThreadPoolExecutor(max_workers=2, thread_name_prefix="wssap")
        try:
            futures: dict[Future[Answer], str] = {
                executor.submit(
                    decide_rounded, rounded[side], tapes[side], self.config, meters[side], cancel
                ): side
                for side in ("ALG1", "ALG2")
            }
            done, _ = wait(futures, return_when=FIRST_COMPLETED)
            winner = next(iter(done))
            logger.debug("wssap_race_finished", winner=futures[winner])
            answer = winner.result()
        finally:
            cancel.set()
            executor.shutdown(wait=True, cancel_futures=True)
        with meter.hold(sum(m.peak_words for m in meters.values())):
            return answer

    def solve(self, query: WssapQuery) -> SolveOutcome:
        inst = query.inst.normalized()
        with solver_run(self.algo, inst) as run:
            before = self.tape.bits_used
            if inst.n == 0:
                answer = Answer.NO
            elif self.race:
                answer = self._race(query, run.meter)
            else:
                answer = decide_rounded(round_alg1(query), self.tape, self.config, run.meter)
            return run.finish(
                answer,
                random_bits_used=self.tape.bits_used - before,
                eps=query.eps_text,
            )
