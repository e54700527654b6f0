"""
Unit tests for the randomized low-space solver: layer split, plan
construction, partition evaluation and the service itself.
"""

import pytest

from solvers.lowspace_subset_sum.coefficient_test import accumulate_r
from solvers.lowspace_subset_sum.domain.models import (
    Answer,
    CoeffQuery,
    HashMode,
    RandConfig,
    SubsetSumInstance,
)
from solvers.lowspace_subset_sum.fields import make_field
from solvers.lowspace_subset_sum.hashing import (
    pairwise_modulus,
    seed_bits_required,
    walk_bits_required,
)
from solvers.lowspace_subset_sum.instances import dp_oracle, generate_instance
from solvers.lowspace_subset_sum.metrics import SpaceMeter
from solvers.lowspace_subset_sum.randomness import RandomTape
from solvers.lowspace_subset_sum.services.randomized_solver_service import (
    RandomizedSolverService,
    build_plan,
    evaluate_gf,
    layer_count,
    layer_index,
    layer_of,
    partition_level1,
    partition_level2,
    randomized_evaluator,
    resolve_load,
)


# ============================================================================
# Fixtures
# ============================================================================


@pytest.fixture
def config() -> RandConfig:
    """Small-field configuration keeping test runs fast."""
    return RandConfig(load_param=2, prime_count_multiplier=4)


@pytest.fixture
def yes_instance() -> SubsetSumInstance:
    """3 + 7 = 12."""
    return SubsetSumInstance(items=(3, 5, 7), target=12)


@pytest.fixture
def no_instance() -> SubsetSumInstance:
    """No subset of 3, 5, 7 sums to 11."""
    return SubsetSumInstance(items=(3, 5, 7), target=11)


def _subset_sums(items):
    sums = {0}
    for a in items:
        sums |= {s + a for s in sums}
    return sums


class TestLayers:
    """Test the value-layer split."""

    def test_layer_count(self):
        """Test L = max(1, ceil(log2 n))."""
        assert [layer_count(n) for n in (0, 1, 2, 3, 4, 5, 8, 9)] == [1, 1, 1, 2, 2, 3, 3, 4]

    def test_layer_index(self):
        """Test that layer i holds items in (t/2^i, t/2^(i-1)]."""
        assert layer_index(12, 12, 3) == 1
        assert layer_index(7, 12, 3) == 1
        assert layer_index(6, 12, 3) == 2
        assert layer_index(3, 12, 3) == 3

    def test_last_layer_takes_small_items(self):
        """Test that tiny items fall into the last layer."""
        assert layer_index(1, 1000, 3) == 3

    def test_layer_of_is_exclusive(self):
        """Test that every item belongs to exactly one layer."""
        for a in range(1, 13):
            assert sum(layer_of(a, 12, i, 3) for i in range(1, 4)) == 1


class TestResolveLoad:
    """Test the load parameter k."""

    def test_override(self):
        """Test that load_param wins."""
        assert resolve_load(1000, RandConfig(load_param=3)) == 3

    def test_loglog_mode(self):
        """Test k = ceil(gamma log2 n) with the default gamma of 4."""
        assert resolve_load(16, RandConfig()) == 16
        assert resolve_load(1, RandConfig()) == 1

    def test_const_mode(self):
        """Test k = ceil(n^eps)."""
        cfg = RandConfig(family_mode=HashMode.CONST, const_eps=0.5)

        assert resolve_load(10, cfg) == 4


class TestBuildPlan:
    """Test plan construction."""

    def test_every_item_in_exactly_one_bin_of_its_layer(self, config: RandConfig):
        """Test that the bins of each layer partition that layer's items."""
        inst = generate_instance(20, 200, RandomTape(seed=12), planted=True)
        plan = build_plan(inst, config, RandomTape(seed=13))

        for layer in range(1, plan.layers + 1):
            seen = [
                idx
                for bin_ in range(plan.bin_count(layer))
                for idx, _ in plan.bin_items(layer, bin_)
            ]
            expected = [
                i
                for i, a in enumerate(plan.inst.items)
                if layer_index(a, plan.inst.target, plan.layers) == layer
            ]
            assert sorted(seen) == expected

    def test_seed_pack_bits_charged(self, config: RandConfig, yes_instance: SubsetSumInstance):
        """Test that the tape pays exactly for r1 and r2."""
        tape = RandomTape(seed=1)

        plan = build_plan(yes_instance, config, tape)

        assert tape.bits_used == plan.seed_pack.r1_bits + plan.seed_pack.r2_bits
        assert len(plan.seeds) == plan.rounds

    def test_seed_lengths_match_hash_and_walk(self, config: RandConfig):
        """Test that r1 covers the widest layer hash and r2 exactly one walk."""
        inst = generate_instance(20, 200, RandomTape(seed=12), planted=True)
        plan = build_plan(inst, config, RandomTape(seed=2))
        bins = [min(1 << i, plan.domain) for i in range(1, plan.layers + 1)]
        modulus = pairwise_modulus(plan.inst.n, plan.mini_groups)

        assert plan.seed_pack.r1_bits == max(seed_bits_required(plan.domain, m) for m in bins)
        assert plan.seed_pack.r2_bits == walk_bits_required(
            plan.rounds, 2 * modulus.bit_length()
        )

    def test_bounds(self, config: RandConfig, yes_instance: SubsetSumInstance):
        """Test the degree and coefficient-size bounds on the small instance."""
        plan = build_plan(yes_instance, config, RandomTape(seed=1))

        assert plan.degree_bound() == 15
        assert plan.coeff_bits() == 48


class TestEvaluation:
    """Test the evaluated generating function."""

    def test_strict_mode_same_value(self, config: RandConfig):
        """Test that strict log-space passes compute the same value."""
        inst = generate_instance(12, 60, RandomTape(seed=2), planted=True)
        plan = build_plan(inst, config, RandomTape(seed=3))
        ctx = make_field(101, 1)
        layer = plan.layers

        def stream():
            return plan.bin_items(layer, 0)

        loose = partition_level2(ctx, 5, stream, plan.load, plan.seeds)
        strict = partition_level2(ctx, 5, stream, plan.load, plan.seeds, strict_logspace=True)

        assert loose == strict

    def test_only_subset_sums_appear(self, config: RandConfig, yes_instance: SubsetSumInstance):
        """Test that every exponent with a nonzero coefficient is a subset sum."""
        plan = build_plan(yes_instance, config, RandomTape(seed=4))
        ev = randomized_evaluator(plan)
        ctx = make_field(17, 1)
        sums = _subset_sums(yes_instance.items)

        for s in range(ev.degree + 1):
            if s not in sums:
                assert accumulate_r(ev, ctx, CoeffQuery.point(s)) == 0

    def test_layers_multiply_to_full_value(
        self, config: RandConfig, yes_instance: SubsetSumInstance
    ):
        """Test that the product of per-layer values is the generating function."""
        plan = build_plan(yes_instance, config, RandomTape(seed=4))
        ctx = make_field(17, 1)

        product = 1
        for layer in range(1, plan.layers + 1):
            product = ctx.mul(product, partition_level1(ctx, 3, layer, plan))

        assert product == evaluate_gf(ctx, 3, plan)

    def test_empty_instance_is_one(self, config: RandConfig):
        """Test that no items evaluate to 1."""
        plan = build_plan(SubsetSumInstance(items=(9,), target=4), config, RandomTape(seed=0))

        assert evaluate_gf(make_field(7, 1), 3, plan) == 1

    def test_meter_released(self, config: RandConfig, yes_instance: SubsetSumInstance):
        """Test that evaluation leaves no live words."""
        plan = build_plan(yes_instance, config, RandomTape(seed=5))
        meter = SpaceMeter()

        evaluate_gf(make_field(53, 1), 2, plan, meter)

        assert meter.current_words == 0
        assert meter.peak_words > 0


class TestRandomizedSolverService:
    """Test the service."""

    def test_yes_instance(self, config: RandConfig, yes_instance: SubsetSumInstance):
        """Test that the small YES instance is detected for every seed."""
        for seed in range(5):
            outcome = RandomizedSolverService(RandomTape(seed=seed), config).solve(yes_instance)

            assert outcome.answer is Answer.YES

    def test_small_no_instance(self, config: RandConfig, no_instance: SubsetSumInstance):
        """Test that 11 is rejected for every seed."""
        for seed in range(5):
            outcome = RandomizedSolverService(RandomTape(seed=seed), config).solve(no_instance)

            assert outcome.answer is Answer.NO

    def test_never_yes_on_no(self, config: RandConfig):
        """Test one-sidedness on generated NO instances."""
        checked = 0
        for stream in range(12):
            inst = generate_instance(6, 40, RandomTape(seed=7, stream=stream))
            if dp_oracle(inst.normalized()) is Answer.YES:
                continue
            checked += 1
            solver = RandomizedSolverService(RandomTape(seed=stream), config)
            assert solver.solve(inst).answer is Answer.NO
        assert checked > 0

    def test_outcome_fields(self, config: RandConfig, yes_instance: SubsetSumInstance):
        """Test algo name, load and bit accounting."""
        tape = RandomTape(seed=9)

        outcome = RandomizedSolverService(tape, config).solve(yes_instance)

        assert outcome.algo == "rand-loglog"
        assert outcome.k == 2
        assert outcome.random_bits_used == tape.bits_used
        assert outcome.space.current_words == 0

    def test_const_mode_name(self, yes_instance: SubsetSumInstance):
        """Test that CONST mode reports rand-eps."""
        cfg = RandConfig(family_mode=HashMode.CONST, load_param=2, prime_count_multiplier=4)

        outcome = RandomizedSolverService(RandomTape(seed=1), cfg).solve(yes_instance)

        assert outcome.algo == "rand-eps"
        assert outcome.answer is Answer.YES

    def test_reproducible(self, config: RandConfig):
        """Test that equal seeds give byte-identical rows."""
        inst = generate_instance(8, 50, RandomTape(seed=1), planted=True)

        rows = [
            RandomizedSolverService(RandomTape(seed=42), config)
            .solve(inst)
            .csv_row(omit_timing=True)
            for _ in range(2)
        ]

        assert rows[0] == rows[1]

    def test_decide_empty_range(self, config: RandConfig):
        """Test that an empty instance answers a window containing 0 with YES."""
        solver = RandomizedSolverService(RandomTape(seed=0), config)
        inst = SubsetSumInstance(items=(), target=5)

        assert solver.decide(inst, CoeffQuery.range(0, 5)) is Answer.YES
        assert solver.decide(inst, CoeffQuery.range(1, 5)) is Answer.NO


class TestSpace:
    """Test that evaluation space does not grow with the target."""

    @pytest.mark.parametrize("strict", [False, True])
    def test_peak_flat_in_target(self, strict: bool):
        """Test peak words for t = 64, 512, 4096 stay within 4 + k^2 (5 in strict mode)."""
        cfg = RandConfig(load_param=2, prime_count_multiplier=4, strict_logspace=strict)
        ctx = make_field(101, 1)

        peaks = []
        for t in (64, 512, 4096):
            inst = generate_instance(12, t, RandomTape(seed=t), planted=True)
            plan = build_plan(inst, cfg, RandomTape(seed=1))
            meter = SpaceMeter()
            evaluate_gf(ctx, 3, plan, meter)
            peaks.append(meter.peak_words)

        assert max(peaks) <= (5 if strict else 4 + 2 * 2)
        if strict:
            assert peaks == [5, 5, 5]
