"""
Randomized low-space solver.

Items are split into value layers (t/2^i, t/2^(i-1)]. Within layer i the
invertible hash scatters item indices into 2^i bins; each bin is scattered
again into k^2 mini-groups by pairwise hash functions whose seeds come from
an expander walk. The resulting generating function

    prod_layers prod_bins sum_rounds prod_minigroups (1 + sum x^a)

only has genuine subset sums as exponents, and on YES instances its x^t
coefficient is positive with high probability. The coefficient test then
decides it over a randomly drawn field.
"""

import math
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass
from threading import Event

from ..coefficient_test import Evaluator, coeff_test_randomized
from ..config import get_settings
from ..domain.models import (
    Answer,
    CoeffQuery,
    HashMode,
    RandConfig,
    SolveOutcome,
    SubsetSumInstance,
)
from ..domain.protocols import BitSource
from ..fields import FieldCtx
from ..hashing import (
    InvertibleHash,
    PairwiseFunc,
    ih_enumerate_bin,
    make_invertible_hash,
    pairwise_eval,
    pairwise_modulus,
    seed_bits_required,
    walk_bits_required,
    walk_seeds,
)
from ..logging import get_logger
from ..metrics import SpaceMeter
from .base import solver_run


logger = get_logger(__name__)

ItemStream = Callable[[], Iterable[tuple[int, int]]]


# =============================================================================
# Layers
# =============================================================================


def layer_count(n: int) -> int:
    """L = max(1, ceil(log2 n))."""
    return max(1, (n - 1).bit_length()) if n > 0 else 1


def layer_index(a: int, t: int, layers: int) -> int:
    """
    Layer of item a: the i with t/2^i < a <= t/2^(i-1), capped at the last
    layer, which takes everything smaller.
    """
    return min(layers, max(1, (t // a).bit_length()))


def layer_of(a: int, t: int, i: int, layers: int) -> bool:
    """Whether item a belongs to layer i."""
    return layer_index(a, t, layers) == i


# =============================================================================
# Seeds and Plan
# =============================================================================


@dataclass(frozen=True)
class SeedPack:
    """Read-only seed strings: r1 for the invertible hash, r2 for the walk."""

    r1: int
    r1_bits: int
    r2: int
    r2_bits: int


@dataclass(frozen=True)
class RandomizedPlan:
    """Everything one run of the pipeline needs, fixed before evaluation.

    Attributes:
        inst: Normalized instance; its target drives the layer split
        load: k, the mini-group parameter (k^2 mini-groups per bin)
        layers: L
        rounds: Walk length, one pairwise seed per round
        domain: N = 2^floor(log2 n), the invertible-hash domain
        hashes: One invertible hash per layer, all seeded from the same r1
        seeds: Pairwise functions v_1..v_rounds
        strict_logspace: k^2 passes per round instead of k^2 accumulators
        seed_pack: The seed strings the plan was built from
    """

    inst: SubsetSumInstance
    load: int
    layers: int
    rounds: int
    domain: int
    hashes: tuple[InvertibleHash, ...]
    seeds: tuple[PairwiseFunc, ...]
    strict_logspace: bool
    seed_pack: SeedPack

    @property
    def mini_groups(self) -> int:
        return self.load * self.load

    def bin_count(self, layer: int) -> int:
        """2^layer bins; those past the hash's bin count stay empty."""
        return 1 << layer

    def bin_items(self, layer: int, bin_: int) -> Iterator[tuple[int, int]]:
        """(index, value) of the layer's items hashed into ``bin_``."""
        h = self.hashes[layer - 1]
        if bin_ >= h.m:
            return
        items = self.inst.items
        t = self.inst.target
        for idx in ih_enumerate_bin(h, bin_):
            if layer_of(items[idx], t, layer, self.layers):
                yield idx, items[idx]
        for idx in range(self.domain + bin_, self.inst.n, h.m):
            if layer_of(items[idx], t, layer, self.layers):
                yield idx, items[idx]

    def degree_bound(self) -> int:
        """max(t, min(sum a_i, 2 k^2 t L))."""
        t = self.inst.target
        return max(t, min(sum(self.inst.items), 2 * self.mini_groups * t * self.layers))

    def coeff_bits(self) -> int:
        """min(n, t) k^2 L c_w, and never below the exact mass bound n*log2(2*rounds)."""
        n = self.inst.n
        c_w = get_settings().coefficient_bits_multiplier
        formula = min(n, self.inst.target) * self.mini_groups * self.layers * c_w
        return max(1, formula, n * (2 * self.rounds).bit_length())


def resolve_load(n: int, cfg: RandConfig) -> int:
    """Load parameter k for an instance of size n."""
    if cfg.load_param is not None:
        return cfg.load_param
    if cfg.family_mode is HashMode.CONST:
        eps = cfg.const_eps if cfg.const_eps is not None else get_settings().const_depth_eps
        return max(1, math.ceil(n**eps))
    log_n = math.log2(n) if n > 1 else 0.0
    return max(1, math.ceil(get_settings().load_gamma * log_n))


def build_plan(inst: SubsetSumInstance, cfg: RandConfig, tape: BitSource) -> RandomizedPlan:
    """
    Draw r1 and r2 from the tape and fix hashes and pairwise seeds.

    Args:
        inst: Instance; normalized here
        cfg: Pipeline configuration
        tape: Bit source
    """
    inst = inst.normalized()
    n = inst.n
    layers = layer_count(n)
    load = resolve_load(n, cfg)
    rounds = cfg.walk_rounds or get_settings().walk_multiplier * layers
    domain = 1 << (n.bit_length() - 1) if n else 1

    bins = [min(1 << i, domain) for i in range(1, layers + 1)]
    r1_bits = max(seed_bits_required(domain, m, cfg.family_mode, cfg.const_eps) for m in bins)
    r1 = tape.read_bits(r1_bits)
    hashes = tuple(
        make_invertible_hash(domain, m, r1, cfg.family_mode, cfg.const_eps) for m in bins
    )

    modulus = pairwise_modulus(n, load * load)
    payload_bits = 2 * modulus.bit_length()
    r2_bits = walk_bits_required(rounds, payload_bits)
    r2 = tape.read_bits(r2_bits)
    seeds = walk_seeds(r2, r2_bits, rounds, payload_bits, modulus=modulus, buckets=load * load)

    logger.debug(
        "randomized_plan_built",
        n=n,
        load=load,
        layers=layers,
        rounds=rounds,
        r1_bits=r1_bits,
        r2_bits=r2_bits,
        depth=max((h.depth for h in hashes), default=0),
    )
    return RandomizedPlan(
        inst=inst,
        load=load,
        layers=layers,
        rounds=rounds,
        domain=domain,
        hashes=hashes,
        seeds=tuple(seeds),
        strict_logspace=cfg.strict_logspace,
        seed_pack=SeedPack(r1=r1, r1_bits=r1_bits, r2=r2, r2_bits=r2_bits),
    )


# =============================================================================
# Evaluation
# =============================================================================


def partition_level2(
    ctx: FieldCtx,
    x: int,
    stream: ItemStream,
    load: int,
    seeds: Iterable[PairwiseFunc],
    strict_logspace: bool = False,
    meter: SpaceMeter | None = None,
) -> int:
    """
    u = sum over rounds j of prod over mini-groups T of (1 + sum_{a in T} x^a).

    Mini-groups are the buckets of the round's pairwise function applied to
    item indices. One pass over ``stream`` per round with one accumulator per
    nonempty mini-group, or, in strict mode, one pass per mini-group.
    """
    meter = meter or SpaceMeter()
    words = ctx.k
    u = 0
    with meter.hold(2 * words):
        for seed in seeds:
            product = 1
            if strict_logspace:
                with meter.hold(words):
                    for group in range(load * load):
                        acc = 0
                        for idx, a in stream():
                            if pairwise_eval(seed, idx) == group:
                                acc = ctx.add(acc, ctx.pow(x, a))
                        product = ctx.mul(product, ctx.add(1, acc))
            else:
                accs: dict[int, int] = {}
                for idx, a in stream():
                    group = pairwise_eval(seed, idx)
                    if group not in accs:
                        meter.alloc(words)
                        accs[group] = 0
                    accs[group] = ctx.add(accs[group], ctx.pow(x, a))
                for acc in accs.values():
                    product = ctx.mul(product, ctx.add(1, acc))
                meter.free(len(accs) * words)
            u = ctx.add(u, product)
    return u


def partition_level1(
    ctx: FieldCtx,
    x: int,
    layer: int,
    plan: RandomizedPlan,
    meter: SpaceMeter | None = None,
) -> int:
    """Product over the layer's bins of partition_level2; empty bins give 1."""
    meter = meter or SpaceMeter()
    result = 1
    with meter.hold(ctx.k):
        for bin_ in range(plan.bin_count(layer)):
            if next(plan.bin_items(layer, bin_), None) is None:
                continue

            def stream(b: int = bin_) -> Iterator[tuple[int, int]]:
                return plan.bin_items(layer, b)

            value = partition_level2(
                ctx, x, stream, plan.load, plan.seeds, plan.strict_logspace, meter
            )
            result = ctx.mul(result, value)
    return result


def evaluate_gf(
    ctx: FieldCtx,
    x: int,
    plan: RandomizedPlan,
    meter: SpaceMeter | None = None,
) -> int:
    """The generating function at x: product over layers of partition_level1."""
    meter = meter or SpaceMeter()
    if plan.inst.n == 0:
        return 1
    result = 1
    with meter.hold(ctx.k):
        for layer in range(1, plan.layers + 1):
            result = ctx.mul(result, partition_level1(ctx, x, layer, plan, meter))
    return result


def randomized_evaluator(plan: RandomizedPlan, degree: int | None = None) -> Evaluator:
    """Wrap evaluate_gf with the plan's degree and coefficient-size bounds."""

    def evaluate(ctx: FieldCtx, x: int, meter: SpaceMeter) -> int:
        return evaluate_gf(ctx, x, plan, meter)

    bound = plan.degree_bound() if degree is None else max(degree, plan.degree_bound())
    return Evaluator(evaluate=evaluate, degree=bound, coeff_bits=plan.coeff_bits())


# =============================================================================
# Service
# =============================================================================


class RandomizedSolverService:
    """
    One-sided randomized solver: never YES on a NO instance.

    Example:
        >>> service = RandomizedSolverService(RandomTape(seed=1))
        >>> service.solve(SubsetSumInstance(items=(3, 5, 7), target=11)).answer
        <Answer.NO: 'NO'>
    """

    def __init__(self, tape: BitSource, config: RandConfig | None = None):
        """
        Initialize the solver.

        Args:
            tape: Source of every random bit the solver uses
            config: Pipeline configuration (LOGLOG mode by default)
        """
        self.tape = tape
        self.config = config or RandConfig()
        self.algo = "rand-eps" if self.config.family_mode is HashMode.CONST else "rand-loglog"

    def decide(
        self,
        inst: SubsetSumInstance,
        query: CoeffQuery,
        meter: SpaceMeter | None = None,
        cancel: Event | None = None,
    ) -> Answer:
        """
        Run the pipeline on ``inst`` and test the queried coefficients.

        The instance target drives the layer split; the query may ask for a
        point or a range of exponents up to it. Setting ``cancel`` from another
        thread stops the run with RunCancelledError.
        """
        if inst.normalized().n == 0:
            return Answer.of(query.lo == 0)
        plan = build_plan(inst, self.config, self.tape)
        ev = randomized_evaluator(plan, degree=query.hi)
        return coeff_test_randomized(
            ev, query, self.tape, self.config.prime_count_multiplier, meter, cancel
        )

    def solve(self, inst: SubsetSumInstance) -> SolveOutcome:
        inst = inst.normalized()
        with solver_run(self.algo, inst) as run:
            before = self.tape.bits_used
            answer = self.decide(inst, CoeffQuery.point(inst.target), run.meter)
            return run.finish(
                answer,
                random_bits_used=self.tape.bits_used - before,
                k=resolve_load(inst.n, self.config),
            )

