"""
Finite-field arithmetic for F_p and F_{p^2}, plus the number-theoretic search
procedures the solvers need to pick their fields.

A field element is a single integer in [0, q). For k = 2 the integer
c0 + c1*p encodes c0 + c1*x modulo the defining quadratic, so the canonical
scan order of elements is plain integer order.

Example:
    >>> ctx = make_field(7, 1)
    >>> fe_pow(ctx, 3, 5)
    5
    >>> find_generator(ctx)
    3
"""

import math
from collections.abc import Iterator
from dataclasses import dataclass
from functools import lru_cache
from itertools import count, islice

from .config import get_settings
from .domain.exceptions import (
    ArgumentError,
    FieldDomainError,
    SolverInvariantError,
    UnsupportedError,
)
from .domain.protocols import BitSource
from .logging import get_logger


logger = get_logger(__name__)


# =============================================================================
# Primes
# =============================================================================


def is_prime(n: int) -> bool:
    """Trial-division primality test."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    limit = math.isqrt(n)
    f = 3
    while f <= limit:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_in_interval(lo: int, hi: int) -> Iterator[int]:
    """
    Stream the primes in [lo, hi] in ascending order.

    Args:
        lo: Lower end, at least 2
        hi: Upper end, at least lo

    Raises:
        ArgumentError: If 2 <= lo <= hi does not hold
    """
    if not 2 <= lo <= hi:
        raise ArgumentError(f"need 2 <= lo <= hi, got lo={lo}, hi={hi}")
    for n in range(lo, hi + 1):
        if is_prime(n):
            yield n


def _primes_from(lo: int) -> Iterator[int]:
    for n in count(max(lo, 2)):
        if is_prime(n):
            yield n


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    return next(_primes_from(n + 1))


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of n >= 1, ascending."""
    factors: list[int] = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            factors.append(f)
            while n % f == 0:
                n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        factors.append(n)
    return factors


def _ceil_sqrt(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


# =============================================================================
# Field Context
# =============================================================================


@dataclass(frozen=True, slots=True)
class FieldCtx:
    """Arithmetic context for F_q with q = p^k, k in {1, 2}.

    For odd p and k = 2 the field is F_p[x]/(x^2 - a) with ``nonresidue`` a.
    For p = 2 and k = 2 it is F_2[x]/(x^2 + x + 1).

    Attributes:
        p: Characteristic
        k: Extension degree
        nonresidue: a, when k = 2 and p is odd
    """

    p: int
    k: int
    nonresidue: int | None = None

    @property
    def q(self) -> int:
        """Field order."""
        return self.p**self.k

    @property
    def generator(self) -> int:
        """Cached generator of the unit group."""
        return find_generator(self)

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> F_q."""
        return n % self.p

    def coords(self, e: int) -> tuple[int, int]:
        """(c0, c1) of an element; c1 is 0 in a prime field."""
        if self.k == 1:
            return e, 0
        return e % self.p, e // self.p

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.k == 1:
            return (a + b) % p
        return (a % p + b % p) % p + ((a // p + b // p) % p) * p

    def sub(self, a: int, b: int) -> int:
        p = self.p
        if self.k == 1:
            return (a - b) % p
        return (a % p - b % p) % p + ((a // p - b // p) % p) * p

    def neg(self, a: int) -> int:
        return self.sub(0, a)

    def mul(self, a: int, b: int) -> int:
        p = self.p
        if self.k == 1:
            return a * b % p
        a0, a1 = a % p, a // p
        b0, b1 = b % p, b // p
        high = a1 * b1
        if self.nonresidue is None:
            # x^2 = x + 1
            c0 = a0 * b0 + high
            c1 = a0 * b1 + a1 * b0 + high
        else:
            c0 = a0 * b0 + high * self.nonresidue
            c1 = a0 * b1 + a1 * b0
        return c0 % p + (c1 % p) * p

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.k == 1:
            return pow(a, e, self.p)
        result = 1
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldDomainError(f"zero has no inverse in F_{self.q}")
        return self.pow(a, self.q - 2)

    def units(self) -> range:
        """F_q^* in canonical order."""
        return range(1, self.q)


@lru_cache(maxsize=1024)
def make_field(p: int, k: int) -> FieldCtx:
    """
    Build the context for F_{p^k}.

    For k = 2 and odd p, scans a = 2, 3, ... and takes the first quadratic
    non-residue (a^((p-1)/2) = -1 mod p).

    Args:
        p: Prime characteristic
        k: Extension degree, 1 or 2

    Raises:
        UnsupportedError: If k is not 1 or 2
        ArgumentError: If p is not prime
    """
    if k not in (1, 2):
        raise UnsupportedError(f"extension degree {k} is not supported (k must be 1 or 2)")
    if not is_prime(p):
        raise ArgumentError(f"{p} is composite, a field characteristic must be prime")

    if k == 1 or p == 2:
        return FieldCtx(p=p, k=k)

    for a in range(2, p):
        if pow(a, (p - 1) // 2, p) == p - 1:
            logger.debug("nonresidue_selected", p=p, nonresidue=a)
            return FieldCtx(p=p, k=2, nonresidue=a)
    raise SolverInvariantError(f"no quadratic non-residue found mod {p}")


def field_of_order(q: int, p: int) -> FieldCtx:
    """Context for q = p or q = p^2."""
    if q == p:
        return make_field(p, 1)
    if q == p * p:
        return make_field(p, 2)
    raise ArgumentError(f"{q} is neither {p} nor {p}^2")


# =============================================================================
# Element Operations
# =============================================================================


def fe_add(ctx: FieldCtx, a: int, b: int) -> int:
    """a + b in ctx."""
    return ctx.add(a, b)


def fe_mul(ctx: FieldCtx, a: int, b: int) -> int:
    """a * b in ctx."""
    return ctx.mul(a, b)


def fe_inv(ctx: FieldCtx, a: int) -> int:
    """
    Multiplicative inverse.

    Raises:
        FieldDomainError: If a is zero
    """
    return ctx.inv(a)


def fe_pow(ctx: FieldCtx, a: int, e: int) -> int:
    """a^e by square-and-multiply; a^0 = 1 for every a."""
    return ctx.pow(a, e)


# =============================================================================
# Generators
# =============================================================================


def _has_full_order(ctx: FieldCtx, g: int, factors: list[int]) -> bool:
    order = ctx.q - 1
    return g != 0 and all(ctx.pow(g, order // r) != 1 for r in factors)


@lru_cache(maxsize=1024)
def find_generator(ctx: FieldCtx) -> int:
    """
    Smallest element of multiplicative order q - 1, in canonical order.

    Order is certified by g^((q-1)/r) != 1 for every prime r | q - 1.
    """
    factors = prime_factors(ctx.q - 1)
    for g in ctx.units():
        if _has_full_order(ctx, g, factors):
            return g
    raise SolverInvariantError(f"F_{ctx.q} has no generator")


def find_generator_random(ctx: FieldCtx, tape: BitSource) -> int:
    """
    Draw random candidates until one has order q - 1.

    Candidates come from the solver's tape; the order check is deterministic.
    """
    factors = prime_factors(ctx.q - 1)
    attempts = 0
    while True:
        attempts += 1
        g = 1 + tape.draw_index(ctx.q - 1)
        if _has_full_order(ctx, g, factors):
            logger.debug("generator_drawn", q=ctx.q, generator=g, attempts=attempts)
            return g


def power_sum_all_units(ctx: FieldCtx, a: int) -> int:
    """
    Sum of x^a over all x in F_q^*, by direct summation.

    Equals 0 when (q-1) does not divide a and -1 when it does.

    Raises:
        ArgumentError: If a < 1
    """
    if a < 1:
        raise ArgumentError(f"power sum needs a positive exponent, got {a}")
    total = 0
    for x in ctx.units():
        total = ctx.add(total, ctx.pow(x, a))
    return total


# =============================================================================
# Field Selection
# =============================================================================


@lru_cache(maxsize=256)
def coefficient_test_primes(d: int, w: int, multiplier: int = 100) -> tuple[tuple[int, int], ...]:
    """
    Prime or prime-square field orders for the coefficient test.

    When d > w^2 returns ceil(multiplier*w / log2 sqrt(d+2)) pairs (p^2, p)
    with odd p >= sqrt(d+2). Otherwise returns ceil(multiplier*w / log2 w)
    pairs (p, p) with p >= max(d+2, w). Every returned q satisfies q - 1 > d.

    Args:
        d: Degree bound of the polynomial
        w: Coefficients are bounded by 2^w
        multiplier: List-length multiplier

    Raises:
        ArgumentError: If d < 1 or w < 1
    """
    if d < 1 or w < 1:
        raise ArgumentError(f"need d >= 1 and w >= 1, got d={d}, w={w}")

    if d > w * w:
        lo = max(3, _ceil_sqrt(d + 2))
        m = math.ceil(multiplier * w / (0.5 * math.log2(d + 2)))
        pairs = tuple((p * p, p) for p in islice(_primes_from(lo), m))
    else:
        lo = max(d + 2, w)
        m = math.ceil(multiplier * w / math.log2(max(w, 2)))
        pairs = tuple((p, p) for p in islice(_primes_from(lo), m))

    logger.debug(
        "coefficient_test_primes_built",
        d=d,
        w=w,
        case="prime_square" if d > w * w else "prime",
        count=len(pairs),
        largest=pairs[-1][0],
    )
    return pairs


def _admissible_divisor(q: int, k: int) -> int | None:
    """Divisor of q - 1 in [ceil(K/2), cap] closest to K, ties to the smaller."""
    log_k = (k - 1).bit_length()
    cap = min(q - 1, max(k, 2 * k * log_k**15))
    lo = -(-k // 2)
    best: int | None = None
    for s in range(lo, cap + 1):
        if (q - 1) % s:
            continue
        if best is None or abs(s - k) < abs(best - k):
            best = s
        elif s > k:
            break
    return best


def _prime_powers_in(lo: int, hi: int) -> list[int]:
    """Values p and p^2 in [lo, hi], ascending."""
    found = list(primes_in_interval(lo, hi)) if 2 <= lo <= hi else []
    p = 2
    while p * p <= hi:
        if p * p >= lo and is_prime(p):
            found.append(p * p)
        p += 1
    return sorted(found)


def admissible_field_orders(
    w_bound: int, k: int, multiplier: int | None = None
) -> tuple[tuple[int, int], ...]:
    """
    Ascending (q, S) pairs with q > w_bound + 1 a prime power and S an admissible divisor.

    The scan window (w_bound + 1, R] doubles until it holds at least
    ceil(multiplier * w / log2 w) admissible orders, w = w_bound, the same list
    length the coefficient test draws its primes from.

    Args:
        w_bound: Lower bound on q - 2
        k: Target batch count K
        multiplier: List-length multiplier (defaults to settings.prime_count_multiplier)

    Raises:
        ArgumentError: If k < 1 or w_bound < 2
    """
    if k < 1 or w_bound < 2:
        raise ArgumentError(f"need K >= 1 and wBound >= 2, got K={k}, wBound={w_bound}")

    mult = multiplier or get_settings().prime_count_multiplier
    need = math.ceil(mult * w_bound / math.log2(w_bound))
    log_k = (k - 1).bit_length()
    found: list[tuple[int, int]] = []
    lo = w_bound + 2
    hi = 2 * lo
    while len(found) < need:
        for q in _prime_powers_in(lo, hi):
            s = _admissible_divisor(q, k)
            if s is None:
                continue
            if (q - 1) % s or not -(-k // 2) <= s <= max(k, 2 * k * log_k**15):
                raise SolverInvariantError(f"divisor {s} of {q - 1} violates the interval")
            found.append((q, s))
            if len(found) == need:
                break
        lo, hi = hi + 1, 2 * hi

    logger.debug("admissible_orders_built", w_bound=w_bound, target=k, count=len(found))
    return tuple(found)


def find_q_with_divisor(
    w_bound: int,
    k: int,
    rng: BitSource | None = None,
    multiplier: int | None = None,
) -> tuple[FieldCtx, int]:
    """
    Find a prime power q > w_bound + 1 whose q - 1 has a divisor near k.

    With ``rng`` q is drawn uniformly from admissible_field_orders; without it
    the smallest admissible q is taken.

    Args:
        w_bound: Lower bound on q - 2
        k: Target batch count K
        rng: Optional bit source for the draw
        multiplier: List-length multiplier for the admissible orders

    Returns:
        (field context, S) with S | q - 1 and ceil(K/2) <= S <= 2K*ceil(log2 K)^15

    Raises:
        ArgumentError: If k < 1 or w_bound < 2
    """
    orders = admissible_field_orders(w_bound, k, multiplier)
    q, s = orders[rng.draw_index(len(orders))] if rng is not None else orders[0]

    p = prime_factors(q)[0]
    logger.debug(
        "field_with_divisor_found", q=q, batch_count=s, target=k, candidates=len(orders)
    )
    return field_of_order(q, p), s
