"""
Tests for prime search, finite-field arithmetic, generators and field
selection.
"""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from solvers.lowspace_subset_sum.domain.exceptions import (
    ArgumentError,
    FieldDomainError,
    UnsupportedError,
)
from solvers.lowspace_subset_sum.fields import (
    admissible_field_orders,
    coefficient_test_primes,
    fe_add,
    fe_inv,
    fe_mul,
    fe_pow,
    field_of_order,
    find_generator,
    find_generator_random,
    find_q_with_divisor,
    is_prime,
    make_field,
    next_prime,
    power_sum_all_units,
    prime_factors,
    primes_in_interval,
)
from solvers.lowspace_subset_sum.randomness import RandomTape


# =============================================================================
# Fixtures
# =============================================================================

FIELDS = [(2, 1), (7, 1), (13, 1), (2, 2), (3, 2), (5, 2), (7, 2)]


@pytest.fixture(params=FIELDS, ids=lambda f: f"F_{f[0]}^{f[1]}")
def ctx(request):
    """A small prime or prime-square field."""
    return make_field(*request.param)


def _order(ctx, g):
    e, x = 1, g
    while x != 1:
        x = ctx.mul(x, g)
        e += 1
    return e


class TestPrimes:
    """Test prime helpers."""

    def test_is_prime(self):
        """Test small primes and composites."""
        assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]

    def test_primes_in_interval(self):
        """Test streaming a closed interval."""
        assert list(primes_in_interval(10, 30)) == [11, 13, 17, 19, 23, 29]

    def test_primes_in_interval_rejects_bad_bounds(self):
        """Test that lo < 2 or lo > hi raises ArgumentError."""
        with pytest.raises(ArgumentError):
            list(primes_in_interval(1, 10))
        with pytest.raises(ArgumentError):
            list(primes_in_interval(11, 10))

    def test_next_prime_is_strict(self):
        """Test that next_prime skips its argument."""
        assert next_prime(7) == 11
        assert next_prime(1) == 2

    def test_prime_factors(self):
        """Test distinct prime factors."""
        assert prime_factors(360) == [2, 3, 5]
        assert prime_factors(97) == [97]
        assert prime_factors(1) == []


class TestFieldArithmetic:
    """Test field axioms on every small field."""

    def test_make_field_rejects_composites(self):
        """Test that composite characteristics are refused."""
        with pytest.raises(ArgumentError):
            make_field(9, 1)

    def test_make_field_rejects_cubic_extensions(self):
        """Test that k = 3 is unsupported."""
        with pytest.raises(UnsupportedError):
            make_field(3, 3)

    def test_quadratic_nonresidue(self):
        """Test the defining polynomial chosen for F_9."""
        assert make_field(3, 2).nonresidue == 2

    def test_f4_multiplication(self):
        """Test that x * x = x + 1 in F_4."""
        f4 = make_field(2, 2)

        assert fe_mul(f4, 2, 2) == 3

    def test_field_of_order(self):
        """Test selecting a context from its order."""
        assert field_of_order(25, 5).k == 2
        assert field_of_order(5, 5).k == 1
        with pytest.raises(ArgumentError):
            field_of_order(125, 5)

    def test_inverse(self, ctx):
        """Test that every unit times its inverse is one."""
        for a in ctx.units():
            assert fe_mul(ctx, a, fe_inv(ctx, a)) == 1

    def test_inverse_of_zero(self, ctx):
        """Test that zero has no inverse."""
        with pytest.raises(FieldDomainError):
            fe_inv(ctx, 0)

    def test_fermat(self, ctx):
        """Test that a^(q-1) = 1 for units and a^0 = 1 everywhere."""
        for a in ctx.units():
            assert fe_pow(ctx, a, ctx.q - 1) == 1
        assert fe_pow(ctx, 0, 0) == 1

    def test_distributive(self, ctx):
        """Test a(b + c) = ab + ac exhaustively on small fields."""
        elems = range(min(ctx.q, 9))
        for a in elems:
            for b in elems:
                for c in elems:
                    left = fe_mul(ctx, a, fe_add(ctx, b, c))
                    right = fe_add(ctx, fe_mul(ctx, a, b), fe_mul(ctx, a, c))
                    assert left == right

    @settings(max_examples=100, deadline=None)
    @given(a=st.integers(0, 48), b=st.integers(0, 48), c=st.integers(0, 48))
    def test_multiplication_associative_in_f49(self, a, b, c):
        """Test associativity of multiplication in F_49."""
        f49 = make_field(7, 2)

        assert fe_mul(f49, fe_mul(f49, a, b), c) == fe_mul(f49, a, fe_mul(f49, b, c))

    def test_negative_exponent(self):
        """Test that a^-1 is the inverse."""
        f13 = make_field(13, 1)

        assert fe_pow(f13, 2, -1) == 7


class TestGenerators:
    """Test generator search."""

    def test_smallest_generator(self):
        """Test known smallest primitive roots."""
        assert find_generator(make_field(7, 1)) == 3
        assert find_generator(make_field(13, 1)) == 2

    def test_generator_has_full_order(self, ctx):
        """Test that the found generator has order q - 1."""
        g = find_generator(ctx)

        assert _order(ctx, g) == ctx.q - 1

    def test_random_generator(self, ctx):
        """Test that a drawn generator has order q - 1."""
        g = find_generator_random(ctx, RandomTape(seed=21))

        assert _order(ctx, g) == ctx.q - 1

    def test_power_sum(self, ctx):
        """Test that power sums over all units are -1 or 0."""
        minus_one = ctx.neg(1)
        for a in range(1, 2 * ctx.q):
            expected = minus_one if a % (ctx.q - 1) == 0 else 0
            assert power_sum_all_units(ctx, a) == expected

    def test_power_sum_rejects_zero_exponent(self):
        """Test that the exponent must be positive."""
        with pytest.raises(ArgumentError):
            power_sum_all_units(make_field(7, 1), 0)


class TestFieldSelection:
    """Test the field lists and batch-divisor search."""

    def test_prime_case(self):
        """Test the prime-field list for d <= w^2."""
        assert coefficient_test_primes(10, 5, multiplier=1) == ((13, 13), (17, 17), (19, 19))

    def test_prime_square_case(self):
        """Test the prime-square list for d > w^2."""
        assert coefficient_test_primes(100, 3, multiplier=1) == ((121, 11),)

    @pytest.mark.parametrize("d,w", [(1, 1), (50, 4), (200, 30), (5000, 8)])
    def test_orders_exceed_degree(self, d, w):
        """Test that every listed order satisfies q - 1 > d."""
        for q, p in coefficient_test_primes(d, w, multiplier=2):
            assert q - 1 > d
            assert q in (p, p * p)

    def test_rejects_bad_bounds(self):
        """Test that d or w below one raises ArgumentError."""
        with pytest.raises(ArgumentError):
            coefficient_test_primes(0, 3)

    def test_divisor_search_deterministic(self):
        """Test the ascending scan on a small case."""
        ctx, s = find_q_with_divisor(10, 3)

        assert ctx.q == 13
        assert s == 3

    @pytest.mark.parametrize("k", [1, 2, 5, 8, 17])
    def test_divisor_interval(self, k):
        """Test that the returned S divides q - 1 and lies in the admissible interval."""
        ctx, s = find_q_with_divisor(100, k, RandomTape(seed=k))

        assert ctx.q > 101
        assert (ctx.q - 1) % s == 0
        assert -(-k // 2) <= s

    def test_divisor_rejects_bad_arguments(self):
        """Test that K < 1 raises ArgumentError."""
        with pytest.raises(ArgumentError):
            find_q_with_divisor(10, 0)

    @pytest.mark.parametrize("k", [1, 3, 6])
    def test_admissible_list_length(self, k):
        """Test that the list holds at least ceil(mult * w / log2 w) valid orders."""
        orders = admissible_field_orders(50, k, multiplier=2)

        assert len(orders) >= math.ceil(2 * 50 / math.log2(50))
        assert [q for q, _ in orders] == sorted({q for q, _ in orders})
        for q, s in orders:
            assert q > 51
            assert (q - 1) % s == 0
            assert -(-k // 2) <= s

    def test_draw_is_from_admissible_list(self):
        """Test that seeded draws land on listed orders and spread over many of them."""
        orders = dict(admissible_field_orders(50, 3, multiplier=2))

        drawn = set()
        for seed in range(40):
            ctx, s = find_q_with_divisor(50, 3, RandomTape(seed=seed), multiplier=2)
            assert orders[ctx.q] == s
            drawn.add(ctx.q)

        assert len(drawn) >= 5

    def test_draw_reaches_beyond_doubling_window(self):
        """Test that the list extends past 2(w + 2) when that window is too sparse."""
        orders = admissible_field_orders(50, 3, multiplier=8)

        assert orders[-1][0] > 2 * 52
