"""
Time-space tradeoff solver.

The q - 1 units are split into S cosets P_j of the subgroup of S-th powers.
Each coset is the root set of a two-term modulus B_j = x^e - g^(je), so the
randomized pipeline can run once per coset with x symbolic and every
polynomial reduced mod B_j; multipoint evaluation then recovers the values at
the coset's points. Space is dominated by residues of length e = (q-1)/S.
"""

from collections.abc import Iterator
from dataclasses import dataclass

from ..domain.exceptions import ArgumentError
from ..domain.models import Answer, RandConfig, SolveOutcome, SubsetSumInstance
from ..domain.protocols import BitSource
from ..fields import FieldCtx, find_generator, find_generator_random, find_q_with_divisor
from ..hashing import pairwise_eval
from ..logging import get_logger
from ..metrics import SpaceMeter
from ..polynomials import (
    BinomialModulus,
    DensePoly,
    ResiduePoly,
    grouped_product,
    mono_mod_binomial,
    multipoint_eval,
    residue_add,
    residue_mul,
)
from .base import solver_run
from .randomized_solver_service import RandomizedPlan, build_plan


logger = get_logger(__name__)


@dataclass(frozen=True)
class BatchPlan:
    """Partition of F_q^* into S cosets with binomial vanishing polynomials.

    Attributes:
        ctx: Field
        generator: g, of order q - 1
        batch_count: S, a divisor of q - 1
    """

    ctx: FieldCtx
    generator: int
    batch_count: int

    @property
    def e(self) -> int:
        """Coset size (q - 1) / S."""
        return (self.ctx.q - 1) // self.batch_count

    def modulus(self, j: int) -> BinomialModulus:
        """B_j = x^e - g^(j e)."""
        return BinomialModulus(self.ctx, self.e, self.ctx.pow(self.generator, j * self.e))

    def points(self, j: int) -> list[int]:
        """P_j = [g^(aS + j) for a in 0..e-1]."""
        ctx = self.ctx
        step = ctx.pow(self.generator, self.batch_count)
        b = ctx.pow(self.generator, j)
        out = []
        for _ in range(self.e):
            out.append(b)
            b = ctx.mul(b, step)
        return out


def plan_batches(ctx: FieldCtx, batch_count: int, generator: int | None = None) -> BatchPlan:
    """
    Plan S batches over F_q^*.

    Args:
        ctx: Field
        batch_count: S, must divide q - 1
        generator: A generator of F_q^*; the canonical one when None

    Raises:
        ArgumentError: If S does not divide q - 1
    """
    if batch_count < 1 or (ctx.q - 1) % batch_count:
        raise ArgumentError(f"batch count {batch_count} does not divide q - 1 = {ctx.q - 1}")
    g = find_generator(ctx) if generator is None else generator
    return BatchPlan(ctx=ctx, generator=g, batch_count=batch_count)


# =============================================================================
# Residue pipeline
# =============================================================================


def _layer_item_cap(t: int, layer: int) -> int:
    """Largest item value layer ``layer`` can hold."""
    return max(1, t >> (layer - 1))


def _round_factors(
    plan: RandomizedPlan,
    mod: BinomialModulus,
    layer: int,
    bin_: int,
    round_: int,
    cap: int,
    meter: SpaceMeter,
) -> Iterator[DensePoly]:
    """Mini-group factors 1 + sum x^a of one walk round, folded mod B."""
    ctx = mod.ctx
    seed = plan.seeds[round_]
    groups: dict[int, dict[int, int]] = {}
    charged = 0
    try:
        for idx, a in plan.bin_items(layer, bin_):
            slot, scale = mono_mod_binomial(a, mod)
            terms = groups.setdefault(pairwise_eval(seed, idx), {})
            if slot not in terms:
                meter.alloc(ctx.k)
                charged += ctx.k
            terms[slot] = ctx.add(terms.get(slot, 0), scale)
        for terms in groups.values():
            coeffs = [0] * (cap + 1)
            coeffs[0] = 1
            for slot, c in terms.items():
                coeffs[slot] = ctx.add(coeffs[slot], c)
            yield DensePoly(ctx, tuple(coeffs))
    finally:
        meter.free(charged)


def _bin_residue(
    plan: RandomizedPlan,
    mod: BinomialModulus,
    layer: int,
    bin_: int,
    meter: SpaceMeter,
) -> ResiduePoly:
    """partition_level2 with x symbolic: sum over rounds of the mini-group products."""
    cap = min(_layer_item_cap(plan.inst.target, layer), mod.e - 1)
    u = ResiduePoly(mod, (0,) * mod.e)
    with meter.hold(mod.e * mod.ctx.k):
        for round_ in range(len(plan.seeds)):
            factors = _round_factors(plan, mod, layer, bin_, round_, cap, meter)
            u = residue_add(u, grouped_product(factors, mod, cap, meter))
    return u


def _layer_residue(
    plan: RandomizedPlan,
    mod: BinomialModulus,
    layer: int,
    meter: SpaceMeter,
) -> ResiduePoly:
    """partition_level1 with x symbolic; empty bins contribute 1."""
    per_bin = plan.mini_groups * _layer_item_cap(plan.inst.target, layer)
    cap = min(per_bin, mod.e - 1)

    def bins() -> Iterator[DensePoly]:
        for bin_ in range(plan.bin_count(layer)):
            if next(plan.bin_items(layer, bin_), None) is None:
                continue
            residue = _bin_residue(plan, mod, layer, bin_, meter)
            yield DensePoly(mod.ctx, residue.coeffs[: cap + 1])

    return grouped_product(bins(), mod, cap, meter)


def batch_residue(
    plan: RandomizedPlan,
    mod: BinomialModulus,
    meter: SpaceMeter | None = None,
) -> ResiduePoly:
    """The generating function of ``plan`` reduced mod B."""
    meter = meter or SpaceMeter()
    acc = ResiduePoly.one(mod)
    if plan.inst.n == 0:
        return acc
    with meter.hold(mod.e * mod.ctx.k):
        for layer in range(1, plan.layers + 1):
            acc = residue_mul(acc, _layer_residue(plan, mod, layer, meter))
    return acc


def evaluate_batch(
    plan: RandomizedPlan,
    batches: BatchPlan,
    j: int,
    meter: SpaceMeter | None = None,
) -> list[int]:
    """Values of the generating function at every point of P_j, in P_j order."""
    meter = meter or SpaceMeter()
    mod = batches.modulus(j)
    residue = batch_residue(plan, mod, meter)
    with meter.hold(mod.e * mod.ctx.k):
        values = multipoint_eval(residue, batches.points(j), meter)
    logger.debug("batch_evaluated", batch=j, size=mod.e)
    return values


# =============================================================================
# Service
# =============================================================================


class TradeoffSolverService:
    """
    Randomized one-sided solver trading time for space through k.

    Larger k means more batches with shorter residues.
    """

    algo = "tradeoff"

    def __init__(self, tape: BitSource, k: int, config: RandConfig | None = None):
        """
        Initialize the solver.

        Args:
            tape: Source of every random bit the solver uses
            k: Tradeoff parameter, 1 <= k <= min(n, t)
            config: Pipeline configuration shared with the randomized solver
        """
        self.tape = tape
        self.k = k
        self.config = config or RandConfig()

    def _check_k(self, inst: SubsetSumInstance) -> None:
        if self.k < 1 or (inst.n and self.k > min(inst.n, inst.target)):
            raise ArgumentError(
                f"k must lie in [1, min(n, t)] = [1, {min(inst.n, inst.target)}], got {self.k}"
            )

    def solve(self, inst: SubsetSumInstance) -> SolveOutcome:
        """
        Decide the instance.

        Raises:
            ArgumentError: If k is outside [1, min(n, t)]
        """
        self._check_k(inst)
        inst = inst.normalized()
        with solver_run(self.algo, inst) as run:
            before = self.tape.bits_used
            if inst.n == 0:
                return run.finish(Answer.NO, k=self.k)

            plan = build_plan(inst, self.config, self.tape)
            bound = max(plan.degree_bound(), plan.coeff_bits(), 2)
            ctx, batch_count = find_q_with_divisor(
                bound, self.k, self.tape, self.config.prime_count_multiplier
            )
            batches = plan_batches(ctx, batch_count, find_generator_random(ctx, self.tape))

            t = inst.target
            r = 0
            with run.meter.hold(ctx.k):
                for j in range(batch_count):
                    values = evaluate_batch(plan, batches, j, run.meter)
                    for b, value in zip(batches.points(j), values, strict=True):
                        r = ctx.add(r, ctx.mul(ctx.pow(b, ctx.q - 1 - t), value))

            notes: tuple[str, ...] = ()
            if batch_count != self.k:
                notes = (f"realized batch count {batch_count} for k={self.k}",)
            return run.finish(
                Answer.of(r != 0),
                random_bits_used=self.tape.bits_used - before,
                k=self.k,
                field_order=ctx.q,
                batch_count=batch_count,
                notes=notes,
            )
