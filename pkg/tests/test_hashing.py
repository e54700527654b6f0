"""
Tests for GF(2^w) arithmetic, k-wise functions, the invertible hash family,
pairwise hashing and expander-walk seed derivation.
"""

import statistics
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solvers.lowspace_subset_sum.domain.exceptions import ArgumentError
from solvers.lowspace_subset_sum.domain.models import HashMode
from solvers.lowspace_subset_sum.hashing import (
    KWiseFunc,
    PairwiseFunc,
    expander_neighbor,
    gf2_mul,
    ih_enumerate_bin,
    ih_eval,
    ih_invert,
    irreducible_poly,
    kwise_eval,
    level_widths,
    make_invertible_hash,
    pairwise_eval,
    pairwise_modulus,
    seed_bits_required,
    walk_bits_required,
    walk_seeds,
)
from solvers.lowspace_subset_sum.randomness import RandomTape


class TestGF2:
    """Test binary-field arithmetic."""

    def test_x_squared_in_gf4(self):
        """Test that x * x = x + 1 modulo x^2 + x + 1."""
        assert gf2_mul(0b10, 0b10, 2, 0b111) == 0b11

    def test_irreducible_degree_two(self):
        """Test that x^2 + 1 is skipped as reducible."""
        assert irreducible_poly(2) == 0b111

    @pytest.mark.parametrize("width", [3, 4, 5])
    def test_no_zero_divisors(self, width):
        """Test that the chosen modulus makes GF(2^w) a field."""
        f = irreducible_poly(width)
        for a in range(1, 1 << width):
            for b in range(1, 1 << width):
                assert gf2_mul(a, b, width, f) != 0

    def test_rejects_zero_width(self):
        """Test that width 0 is refused."""
        with pytest.raises(ArgumentError):
            irreducible_poly(0)


class TestKWiseFunc:
    """Test polynomial hash functions."""

    def test_constant_function(self):
        """Test that k = 1 ignores its input."""
        f = KWiseFunc(k=1, word_bits=4, out_bits=3, coeffs=(0b1101,))

        assert {kwise_eval(f, x) for x in range(16)} == {0b101}

    def test_linear_function_is_injective(self):
        """Test that a*x + b with a != 0 permutes GF(2^w)."""
        f = KWiseFunc(k=2, word_bits=5, out_bits=5, coeffs=(7, 3))

        assert sorted(kwise_eval(f, x) for x in range(32)) == list(range(32))

    @pytest.mark.parametrize(
        "k,points,out_bits",
        [(2, (0, 5), 3), (2, (1, 6), 2), (3, (0, 3, 7), 3), (3, (2, 4, 5), 1)],
    )
    def test_exact_kwise_uniformity(self, k: int, points: tuple[int, ...], out_bits: int):
        """Test that over all coefficient tuples on GF(8) every output tuple is equally likely."""
        counts: dict[tuple[int, ...], int] = {}
        for coeffs in product(range(8), repeat=k):
            f = KWiseFunc(k=k, word_bits=3, out_bits=out_bits, coeffs=coeffs)
            image = tuple(kwise_eval(f, x) for x in points)
            counts[image] = counts.get(image, 0) + 1

        assert len(counts) == (1 << out_bits) ** k
        assert set(counts.values()) == {8**k // (1 << out_bits) ** k}

    def test_input_range_checked(self):
        """Test that inputs wider than the field are refused."""
        f = KWiseFunc(k=2, word_bits=3, out_bits=2, coeffs=(1, 1))

        with pytest.raises(ArgumentError):
            kwise_eval(f, 8)

    def test_shape_checked(self):
        """Test coefficient count and output width validation."""
        with pytest.raises(ArgumentError):
            KWiseFunc(k=2, word_bits=3, out_bits=2, coeffs=(1,))
        with pytest.raises(ArgumentError):
            KWiseFunc(k=1, word_bits=3, out_bits=4, coeffs=(1,))


class TestLevelWidths:
    """Test the level schedule."""

    @pytest.mark.parametrize("mode", [HashMode.LOGLOG, HashMode.CONST])
    @pytest.mark.parametrize("log_m", [0, 1, 5, 12, 16])
    def test_widths_cover_bin_bits(self, mode, log_m):
        """Test that the widths are positive and sum to log2 m."""
        widths = level_widths(1 << 16, 1 << log_m, mode, const_eps=0.5)

        assert sum(widths) == log_m
        assert all(w > 0 for w in widths)

    def test_loglog_schedule(self):
        """Test the quarter-splitting schedule for n = m = 2^16."""
        assert level_widths(1 << 16, 1 << 16) == [4, 3, 2, 1, 1, 1, 4]

    def test_const_mode_is_shallower(self):
        """Test that CONST mode stops splitting earlier."""
        loglog = level_widths(1 << 16, 1 << 16, HashMode.LOGLOG)
        const = level_widths(1 << 16, 1 << 16, HashMode.CONST, const_eps=0.5)

        assert len(const) < len(loglog)

    def test_rejects_non_powers_and_oversized_m(self):
        """Test argument validation."""
        with pytest.raises(ArgumentError):
            level_widths(12, 4)
        with pytest.raises(ArgumentError):
            level_widths(8, 16)


class TestInvertibleHash:
    """Test the bijection and its bin enumeration."""

    @pytest.mark.parametrize("n,m", [(1, 1), (16, 1), (64, 8), (256, 256), (1024, 32)])
    def test_bijection(self, n, m):
        """Test that eval is a bijection onto [m] x [n/m] and invert undoes it."""
        r1_bits = seed_bits_required(n, m)
        h = make_invertible_hash(n, m, RandomTape(seed=n + m).read_bits(r1_bits))

        images = [ih_eval(h, x) for x in range(n)]

        assert len(set(images)) == n
        assert all(0 <= b < m and 0 <= s < n // m for b, s in images)
        assert all(ih_invert(h, b, s) == x for x, (b, s) in enumerate(images))

    def test_seed_bits_match(self):
        """Test that the built stack consumes exactly the required seed length."""
        for mode in HashMode:
            h = make_invertible_hash(1 << 12, 1 << 9, 0, mode, const_eps=0.5)

            assert h.seed_bits == seed_bits_required(1 << 12, 1 << 9, mode, const_eps=0.5)

    @pytest.mark.parametrize("log_n", [8, 10, 12, 16])
    def test_seed_budget_polylog(self, log_n: int):
        """Test that LOGLOG stacks need at most 4 log2(n)^2 seed bits for every bin count."""
        n = 1 << log_n
        for log_m in range(log_n + 1):
            assert seed_bits_required(n, 1 << log_m) <= 4 * log_n * log_n

    @settings(max_examples=20, deadline=None)
    @given(r1=st.integers(min_value=0, max_value=(1 << 256) - 1), bin_=st.integers(0, 15))
    def test_enumerate_bin(self, r1, bin_):
        """Test that enumeration yields exactly the preimages of a bin."""
        h = make_invertible_hash(128, 16, r1)

        members = sorted(ih_enumerate_bin(h, bin_))

        assert members == [x for x in range(128) if ih_eval(h, x)[0] == bin_]

    def test_out_of_range(self):
        """Test domain checks of eval and invert."""
        h = make_invertible_hash(16, 4, 0)
        with pytest.raises(ArgumentError):
            ih_eval(h, 16)
        with pytest.raises(ArgumentError):
            ih_invert(h, 4, 0)


class TestPairwise:
    """Test pairwise-independent hashing."""

    def test_modulus_is_prime_above_both(self):
        """Test the modulus choice."""
        assert pairwise_modulus(10, 4) == 11
        assert pairwise_modulus(3, 16) == 17

    def test_values_in_range(self):
        """Test that every bucket lies in [0, buckets)."""
        f = PairwiseFunc(modulus=17, a=5, b=3, buckets=4)

        assert all(0 <= pairwise_eval(f, x) < 4 for x in range(16))

    def test_rejects_zero_multiplier(self):
        """Test that a = 0 is refused."""
        with pytest.raises(ArgumentError):
            PairwiseFunc(modulus=17, a=0, b=3, buckets=4)

    @pytest.mark.parametrize("buckets", [2, 4, 16])
    def test_collision_rate_over_family(self, buckets: int):
        """Test Pr[h(x) = h(y)] <= 1/buckets over every (a, b) for each pair x != y."""
        modulus = 17
        family = [
            PairwiseFunc(modulus=modulus, a=a, b=b, buckets=buckets)
            for a in range(1, modulus)
            for b in range(modulus)
        ]

        for x in range(modulus):
            for y in range(x + 1, modulus):
                collisions = sum(pairwise_eval(f, x) == pairwise_eval(f, y) for f in family)
                assert collisions * buckets <= len(family)

    def test_small_set_member_isolated(self):
        """Test that an item shares its mini-group with none of two others w.p. >= 1 - 2/16."""
        modulus = pairwise_modulus(16, 16)
        family = [
            PairwiseFunc(modulus=modulus, a=a, b=b, buckets=16)
            for a in range(1, modulus)
            for b in range(modulus)
        ]
        members = (2, 7, 11)

        isolated = sum(
            all(pairwise_eval(f, members[0]) != pairwise_eval(f, y) for y in members[1:])
            for f in family
        )

        assert isolated * 16 >= len(family) * (16 - 2)


class TestExpanderWalk:
    """Test expander neighbors and walk seeds."""

    @pytest.mark.parametrize("forward,backward", [(1, 2), (3, 4), (5, 6), (7, 8)])
    def test_neighbor_pairs_are_inverse(self, forward, backward):
        """Test that paired neighbor maps undo each other."""
        for v in [(0, 0), (3, 5), (15, 1)]:
            assert expander_neighbor(16, expander_neighbor(16, v, forward), backward) == v

    def test_neighbor_index_checked(self):
        """Test that index 9 is refused."""
        with pytest.raises(ArgumentError):
            expander_neighbor(16, (0, 0), 9)

    def test_walk_bits(self):
        """Test start-vertex plus per-step accounting."""
        assert walk_bits_required(3, 10) == 16
        assert walk_bits_required(1, 9) == 10

    def test_walk_seeds(self):
        """Test that a walk yields valid pairwise functions."""
        need = walk_bits_required(5, 10)
        r2 = RandomTape(seed=4).read_bits(need)

        seeds = walk_seeds(r2, need, 5, 10, modulus=17, buckets=4)

        assert len(seeds) == 5
        assert all(1 <= s.a < 17 and 0 <= s.b < 17 for s in seeds)

    def test_walk_needs_enough_bits(self):
        """Test that a short seed is refused."""
        with pytest.raises(ArgumentError):
            walk_seeds(0, 10, 5, 10, modulus=17, buckets=4)

    def test_walk_averages_concentrate(self):
        """Test that walk visits to half the vertex set average 1/2 with bounded spread."""
        count, payload_bits = 129, 8
        need = walk_bits_required(count, payload_bits)
        tape = RandomTape(seed=21)

        fractions = []
        for _ in range(400):
            r2 = tape.read_bits(need)
            seeds = walk_seeds(r2, need, count, payload_bits, modulus=257, buckets=4)
            fractions.append(sum(s.b < 8 for s in seeds) / count)

        assert abs(statistics.fmean(fractions) - 0.5) < 0.05
        assert statistics.pstdev(fractions) < 0.25
