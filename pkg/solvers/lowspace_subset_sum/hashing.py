"""
Randomness infrastructure of the low-space solvers.

This module provides:
- k-wise independent functions (polynomials over GF(2^w))
- Pairwise-independent hashing of item indices into mini-groups
- The efficiently invertible hash family: a bijection [n] -> [m] x [n/m]
  built from a stack of Feistel-like levels, so every bin can be enumerated
  with constant extra state
- An explicit 8-regular expander on Z_m x Z_m and walk-based seed derivation
"""

import math
from collections.abc import Iterator
from dataclasses import dataclass
from functools import lru_cache

from .config import get_settings
from .domain.exceptions import ArgumentError
from .domain.models import HashMode
from .fields import next_prime
from .logging import get_logger


logger = get_logger(__name__)


# =============================================================================
# GF(2^w) arithmetic
# =============================================================================


def _gf2_degree(a: int) -> int:
    return a.bit_length() - 1


def _gf2_mod(a: int, f: int) -> int:
    df = _gf2_degree(f)
    while a and _gf2_degree(a) >= df:
        a ^= f << (_gf2_degree(a) - df)
    return a


def _gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _gf2_mod(a, b)
    return a


def gf2_mul(a: int, b: int, width: int, modulus: int) -> int:
    """Carryless product of a and b reduced modulo the degree-``width`` polynomial."""
    result = 0
    top = 1 << width
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return result


@lru_cache(maxsize=128)
def irreducible_poly(width: int) -> int:
    """
    Smallest degree-``width`` irreducible polynomial over GF(2) with odd low part.

    Irreducibility by Ben-Or: gcd(f, x^(2^i) - x) = 1 for every i <= width/2.
    """
    if width < 1:
        raise ArgumentError(f"field width must be >= 1, got {width}")
    for low in range(1, 1 << width, 2):
        f = (1 << width) | low
        power = 0b10
        for _ in range(width // 2):
            power = gf2_mul(power, power, width, f)
            if _gf2_gcd(f, power ^ 0b10) != 1:
                break
        else:
            return f
    raise ArgumentError(f"no irreducible polynomial of degree {width}")


# =============================================================================
# k-wise independent functions
# =============================================================================


@dataclass(frozen=True, slots=True)
class KWiseFunc:
    """Degree-(k-1) polynomial over GF(2^word_bits), truncated to out_bits.

    Attributes:
        k: Independence order
        word_bits: Input width and field width
        out_bits: Output width
        coeffs: k coefficients, constant term first
    """

    k: int
    word_bits: int
    out_bits: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.k < 1 or len(self.coeffs) != self.k:
            raise ArgumentError(f"need k >= 1 coefficients, got k={self.k}")
        if self.out_bits > self.word_bits:
            raise ArgumentError("output width exceeds the field width")


def kwise_eval(f: KWiseFunc, x: int) -> int:
    """
    Evaluate f at x by Horner's rule and keep the low ``out_bits`` bits.

    Raises:
        ArgumentError: If x does not fit in word_bits
    """
    if not 0 <= x < 1 << f.word_bits:
        raise ArgumentError(f"input {x} does not fit in {f.word_bits} bits")
    modulus = irreducible_poly(f.word_bits)
    acc = 0
    for c in reversed(f.coeffs):
        acc = gf2_mul(acc, x, f.word_bits, modulus) ^ c
    return acc & ((1 << f.out_bits) - 1)


# =============================================================================
# Invertible hash family
# =============================================================================


@dataclass(frozen=True, slots=True)
class HashLevel:
    """One level f_i(b, u) = ((b xor g_i(u)) << slot_bits) | u.

    Attributes:
        width: l_i, bits of the bin chunk peeled off at this level
        slot_bits: log2 n_i, bits kept for the next level
        func: g_i, evaluated on u in [n_i]
    """

    width: int
    slot_bits: int
    func: KWiseFunc


@dataclass(frozen=True, slots=True)
class InvertibleHash:
    """Bijection [n] -> [m] x [n/m] with per-bin enumeration.

    Attributes:
        n: Domain size, a power of two
        m: Bin count, a power of two with m <= n
        levels: Level stack, first level peels the most significant bin bits
        seed_bits: Bits of r1 consumed by the level functions
    """

    n: int
    m: int
    levels: tuple[HashLevel, ...]
    seed_bits: int

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def slot_count(self) -> int:
        return self.n // self.m


def _log2_exact(v: int, name: str) -> int:
    if v < 1 or v & (v - 1):
        raise ArgumentError(f"{name} must be a power of two, got {v}")
    return v.bit_length() - 1


def level_widths(
    n: int, m: int, mode: HashMode = HashMode.LOGLOG, const_eps: float | None = None
) -> list[int]:
    """
    Bin-bit widths l_1..l_d.

    Intermediate levels take floor(log2 m_(i-1) / 4) bits while m_(i-1) stays
    above log2 n (LOGLOG) or n^eps (CONST); zero-width levels end the split
    and the final level takes the remaining width. m = 1 gives no levels.
    """
    log_n = _log2_exact(n, "n")
    remaining = _log2_exact(m, "m")
    if remaining > log_n:
        raise ArgumentError(f"bin count {m} exceeds domain size {n}")

    if mode is HashMode.CONST:
        eps = const_eps if const_eps is not None else get_settings().const_depth_eps
        threshold = eps * log_n
    else:
        threshold = math.log2(log_n) if log_n > 0 else 0.0

    widths: list[int] = []
    while remaining > threshold:
        width = remaining // 4
        if width == 0:
            break
        widths.append(width)
        remaining -= width
    if remaining:
        widths.append(remaining)
    return widths


def _independence(log_n: int, width: int, final: bool, multiplier: int) -> int:
    if final:
        if log_n <= 2:
            return 2
        return max(2, math.ceil(log_n / math.log2(log_n)))
    return max(2, 2 * math.ceil(max(log_n, 1) * multiplier / (2 * width)))


def _level_shapes(
    n: int,
    m: int,
    mode: HashMode,
    const_eps: float | None,
    multiplier: int,
) -> list[tuple[int, int, int, int]]:
    """(width, slot_bits, word_bits, k) per level."""
    log_n = _log2_exact(n, "n")
    log_slots = log_n - _log2_exact(m, "m")
    widths = level_widths(n, m, mode, const_eps)

    shapes = []
    remaining = sum(widths)
    for i, width in enumerate(widths):
        remaining -= width
        slot_bits = remaining + log_slots
        word_bits = max(slot_bits, width, 1)
        k = _independence(log_n, width, i == len(widths) - 1, multiplier)
        shapes.append((width, slot_bits, word_bits, k))
    return shapes


def seed_bits_required(
    n: int,
    m: int,
    mode: HashMode = HashMode.LOGLOG,
    const_eps: float | None = None,
) -> int:
    """Length of r1 needed by make_invertible_hash for these parameters."""
    multiplier = get_settings().hash_independence_multiplier
    return sum(k * word for _, _, word, k in _level_shapes(n, m, mode, const_eps, multiplier))


def make_invertible_hash(
    n: int,
    m: int,
    r1: int,
    mode: HashMode = HashMode.LOGLOG,
    const_eps: float | None = None,
) -> InvertibleHash:
    """
    Build the level stack from seed bits r1, read least significant bit first.

    Args:
        n: Domain size, a power of two
        m: Bin count, a power of two
        r1: Seed bits as an integer
        mode: LOGLOG or CONST depth policy
        const_eps: eps of the CONST policy

    Raises:
        ArgumentError: If n or m is not a power of two or m > n
    """
    multiplier = get_settings().hash_independence_multiplier
    levels = []
    cursor = 0
    for width, slot_bits, word_bits, k in _level_shapes(n, m, mode, const_eps, multiplier):
        mask = (1 << word_bits) - 1
        coeffs = tuple((r1 >> (cursor + j * word_bits)) & mask for j in range(k))
        cursor += k * word_bits
        levels.append(
            HashLevel(
                width=width,
                slot_bits=slot_bits,
                func=KWiseFunc(k=k, word_bits=word_bits, out_bits=width, coeffs=coeffs),
            )
        )
    return InvertibleHash(n=n, m=m, levels=tuple(levels), seed_bits=cursor)


def ih_eval(h: InvertibleHash, x: int) -> tuple[int, int]:
    """
    Map x in [n] to (bin, slot) by inverting the levels one by one.

    Raises:
        ArgumentError: If x is outside [n]
    """
    if not 0 <= x < h.n:
        raise ArgumentError(f"{x} is outside the hash domain [0, {h.n})")
    bin_ = 0
    for level in h.levels:
        u = x & ((1 << level.slot_bits) - 1)
        top = x >> level.slot_bits
        b = top ^ kwise_eval(level.func, u)
        bin_ = (bin_ << level.width) | b
        x = u
    return bin_, x


def ih_invert(h: InvertibleHash, bin_: int, slot: int) -> int:
    """
    Map (bin, slot) back to its preimage in [n].

    Raises:
        ArgumentError: If bin or slot is out of range
    """
    if not 0 <= bin_ < h.m or not 0 <= slot < h.slot_count:
        raise ArgumentError(f"({bin_}, {slot}) is outside [{h.m}] x [{h.slot_count}]")
    x = slot
    shift = 0
    for level in reversed(h.levels):
        b = (bin_ >> shift) & ((1 << level.width) - 1)
        shift += level.width
        x = ((b ^ kwise_eval(level.func, x)) << level.slot_bits) | x
    return x


def ih_enumerate_bin(h: InvertibleHash, bin_: int) -> Iterator[int]:
    """Stream the n/m preimages of a bin."""
    for slot in range(h.slot_count):
        yield ih_invert(h, bin_, slot)


# =============================================================================
# Pairwise-independent hashing
# =============================================================================


@dataclass(frozen=True, slots=True)
class PairwiseFunc:
    """x -> ((a*x + b) mod P) mod buckets.

    Attributes:
        modulus: Prime P larger than the domain
        a: Multiplier in [1, P)
        b: Offset in [0, P)
        buckets: Range size
    """

    modulus: int
    a: int
    b: int
    buckets: int

    def __post_init__(self) -> None:
        if not 1 <= self.a < self.modulus or not 0 <= self.b < self.modulus:
            raise ArgumentError(f"need 1 <= a < P and 0 <= b < P, got a={self.a}, b={self.b}")
        if self.buckets < 1:
            raise ArgumentError("bucket count must be positive")


def pairwise_eval(f: PairwiseFunc, x: int) -> int:
    """Bucket of x."""
    return ((f.a * x + f.b) % f.modulus) % f.buckets


def pairwise_modulus(domain: int, buckets: int) -> int:
    """Prime above both the domain size and the bucket count."""
    return next_prime(max(domain, buckets))


# =============================================================================
# Expander walks
# =============================================================================


def expander_neighbor(side: int, v: tuple[int, int], i: int) -> tuple[int, int]:
    """
    i-th neighbor of v on the 8-regular grid expander over Z_side^2.

    Neighbor pairs (1, 2), (3, 4), (5, 6), (7, 8) are mutual inverses.

    Raises:
        ArgumentError: If i is not in [1, 8]
    """
    x, y = v
    match i:
        case 1:
            x = x + y
        case 2:
            x = x - y
        case 3:
            x = x + y + 1
        case 4:
            x = x - y - 1
        case 5:
            y = y + x
        case 6:
            y = y - x
        case 7:
            y = y + x + 1
        case 8:
            y = y - x - 1
        case _:
            raise ArgumentError(f"neighbor index must be in [1, 8], got {i}")
    return x % side, y % side


def walk_bits_required(count: int, payload_bits: int) -> int:
    """Seed bits a walk of ``count`` vertices consumes."""
    return 2 * -(-payload_bits // 2) + 3 * max(count - 1, 0)


def walk_seeds(
    r2: int,
    r2_bits: int,
    count: int,
    payload_bits: int,
    *,
    modulus: int,
    buckets: int,
) -> list[PairwiseFunc]:
    """
    Derive ``count`` pairwise seeds from one short seed by an expander walk.

    The start vertex is the low 2*ceil(payload_bits/2) bits of r2, each step
    reads 3 more bits as neighbor index 1 + value. A vertex (x, y) decodes to
    a = 1 + x mod (P - 1), b = y mod P.

    Raises:
        ArgumentError: If r2 is too short for the walk
    """
    side_bits = -(-payload_bits // 2)
    need = walk_bits_required(count, payload_bits)
    if r2_bits < need:
        raise ArgumentError(f"walk needs {need} seed bits, only {r2_bits} available")

    side = 1 << side_bits
    v = (r2 & (side - 1), (r2 >> side_bits) & (side - 1))
    cursor = 2 * side_bits
    seeds = []
    for step in range(count):
        if step:
            v = expander_neighbor(side, v, 1 + ((r2 >> cursor) & 0b111))
            cursor += 3
        x, y = v
        seeds.append(
            PairwiseFunc(
                modulus=modulus,
                a=1 + x % (modulus - 1),
                b=y % modulus,
                buckets=buckets,
            )
        )
    return seeds
