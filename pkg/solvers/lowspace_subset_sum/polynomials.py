"""
Dense polynomial arithmetic over a FieldCtx.

Covers multiplication (schoolbook, NTT or Karatsuba), reduction modulo
two-term binomials x^e - h, subproduct-tree multipoint evaluation and the
closed-form geometric range selector used by range coefficient queries.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .config import get_settings
from .domain.exceptions import ArgumentError, FieldDomainError
from .fields import FieldCtx, find_generator
from .metrics import SpaceMeter


# =============================================================================
# Types
# =============================================================================


def _strip(coeffs: Sequence[int]) -> tuple[int, ...]:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


@dataclass(frozen=True, slots=True)
class DensePoly:
    """Coefficient vector over ctx; index i holds the coefficient of x^i.

    Trailing zeros are stripped on construction, so the zero polynomial has
    an empty vector and degree -1.

    Example:
        >>> f = DensePoly(make_field(7, 1), (1, 0, 1))
        >>> f.degree, f(3)
        (2, 3)
    """

    ctx: FieldCtx
    coeffs: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, ctx: FieldCtx, c: int) -> "DensePoly":
        return cls(ctx, (c,))

    @classmethod
    def monomial(cls, ctx: FieldCtx, exponent: int, c: int = 1) -> "DensePoly":
        return cls(ctx, (0,) * exponent + (c,))

    def __call__(self, x: int) -> int:
        """Horner evaluation."""
        ctx = self.ctx
        acc = 0
        for c in reversed(self.coeffs):
            acc = ctx.add(ctx.mul(acc, x), c)
        return acc


@dataclass(frozen=True, slots=True)
class BinomialModulus:
    """B(x) = x^e - h with e >= 1 and h != 0."""

    ctx: FieldCtx
    e: int
    h: int

    def __post_init__(self) -> None:
        if self.e < 1:
            raise ArgumentError(f"binomial exponent must be >= 1, got {self.e}")
        if self.h == 0:
            raise ArgumentError("binomial constant h must be nonzero")

    def as_dense(self) -> DensePoly:
        return DensePoly(self.ctx, (self.ctx.neg(self.h),) + (0,) * (self.e - 1) + (1,))


@dataclass(frozen=True, slots=True)
class ResiduePoly:
    """Polynomial reduced modulo a BinomialModulus; always exactly e coefficients."""

    modulus: BinomialModulus
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.modulus.e:
            raise ArgumentError(
                f"residue needs {self.modulus.e} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def one(cls, modulus: BinomialModulus) -> "ResiduePoly":
        return cls(modulus, (1,) + (0,) * (modulus.e - 1))

    def as_dense(self) -> DensePoly:
        return DensePoly(self.modulus.ctx, self.coeffs)


# =============================================================================
# Multiplication
# =============================================================================


def _schoolbook(ctx: FieldCtx, a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    if ctx.k == 1:
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        p = ctx.p
        return [c % p for c in out]
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = ctx.add(out[i + j], ctx.mul(ai, bj))
    return out


def _add_into(ctx: FieldCtx, out: list[int], src: Sequence[int], shift: int) -> None:
    for i, c in enumerate(src):
        out[i + shift] = ctx.add(out[i + shift], c)


def _karatsuba(ctx: FieldCtx, a: Sequence[int], b: Sequence[int], cutoff: int) -> list[int]:
    if min(len(a), len(b)) <= cutoff:
        return _schoolbook(ctx, a, b)

    half = max(len(a), len(b)) // 2
    a0, a1 = a[:half], a[half:]
    b0, b1 = b[:half], b[half:]
    if not a1 or not b1:
        return _schoolbook(ctx, a, b)

    low = _karatsuba(ctx, a0, b0, cutoff)
    high = _karatsuba(ctx, a1, b1, cutoff)
    sa = [ctx.add(x, y) for x, y in _zip_pad(a0, a1)]
    sb = [ctx.add(x, y) for x, y in _zip_pad(b0, b1)]
    mid = _karatsuba(ctx, sa, sb, cutoff)
    for i, c in enumerate(low):
        mid[i] = ctx.sub(mid[i], c)
    for i, c in enumerate(high):
        mid[i] = ctx.sub(mid[i], c)

    out = [0] * (len(a) + len(b) - 1)
    _add_into(ctx, out, low, 0)
    _add_into(ctx, out, mid[: len(out) - half], half)
    _add_into(ctx, out, high, 2 * half)
    return out


def _zip_pad(x: Sequence[int], y: Sequence[int]) -> Iterable[tuple[int, int]]:
    n = max(len(x), len(y))
    for i in range(n):
        yield (x[i] if i < len(x) else 0, y[i] if i < len(y) else 0)


def _ntt(values: list[int], root: int, p: int) -> list[int]:
    """Iterative radix-2 transform; len(values) is a power of two."""
    n = len(values)
    a = values[:]
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]

    length = 2
    while length <= n:
        w_len = pow(root, n // length, p)
        for start in range(0, n, length):
            w = 1
            for k in range(start, start + length // 2):
                u = a[k]
                v = a[k + length // 2] * w % p
                a[k] = (u + v) % p
                a[k + length // 2] = (u - v) % p
                w = w * w_len % p
        length <<= 1
    return a


def _ntt_size(ctx: FieldCtx, out_len: int) -> int | None:
    """Transform size usable for this product, or None when F_p lacks the roots."""
    if ctx.k != 1:
        return None
    size = 1
    while size < out_len:
        size <<= 1
    return size if (ctx.p - 1) % size == 0 else None


def _ntt_mul(ctx: FieldCtx, a: Sequence[int], b: Sequence[int], size: int) -> list[int]:
    p = ctx.p
    root = pow(find_generator(ctx), (p - 1) // size, p)
    fa = _ntt(list(a) + [0] * (size - len(a)), root, p)
    fb = _ntt(list(b) + [0] * (size - len(b)), root, p)
    prod = [x * y % p for x, y in zip(fa, fb, strict=True)]
    inv_root = pow(root, p - 2, p)
    inv_size = pow(size, p - 2, p)
    out = _ntt(prod, inv_root, p)
    return [c * inv_size % p for c in out[: len(a) + len(b) - 1]]


def poly_mul(a: DensePoly, b: DensePoly) -> DensePoly:
    """
    Exact product.

    Schoolbook below ``settings.schoolbook_cutoff``; above it NTT when the
    prime field has the needed 2-power roots of unity, Karatsuba otherwise.

    Raises:
        ArgumentError: If the operands live in different fields
    """
    if a.ctx != b.ctx:
        raise ArgumentError("polynomials belong to different fields")
    ctx = a.ctx
    if not a.coeffs or not b.coeffs:
        return DensePoly(ctx)

    cutoff = get_settings().schoolbook_cutoff
    if min(len(a.coeffs), len(b.coeffs)) <= cutoff:
        return DensePoly(ctx, _schoolbook(ctx, a.coeffs, b.coeffs))

    size = _ntt_size(ctx, len(a.coeffs) + len(b.coeffs) - 1)
    if size is not None:
        return DensePoly(ctx, _ntt_mul(ctx, a.coeffs, b.coeffs, size))
    return DensePoly(ctx, _karatsuba(ctx, a.coeffs, b.coeffs, cutoff))


def poly_add(a: DensePoly, b: DensePoly) -> DensePoly:
    """a + b."""
    ctx = a.ctx
    return DensePoly(ctx, [ctx.add(x, y) for x, y in _zip_pad(a.coeffs, b.coeffs)])


def poly_divmod(a: DensePoly, b: DensePoly) -> tuple[DensePoly, DensePoly]:
    """
    Long division a = quotient*b + remainder with deg remainder < deg b.

    Raises:
        FieldDomainError: If b is the zero polynomial
    """
    if b.degree < 0:
        raise FieldDomainError("division by the zero polynomial")
    ctx = a.ctx
    rem = list(a.coeffs)
    db = b.degree
    if len(rem) <= db:
        return DensePoly(ctx), a

    lead_inv = ctx.inv(b.coeffs[-1])
    quot = [0] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        factor = ctx.mul(c, lead_inv)
        quot[i - db] = factor
        for j, bj in enumerate(b.coeffs):
            if bj:
                rem[i - db + j] = ctx.sub(rem[i - db + j], ctx.mul(factor, bj))
    return DensePoly(ctx, quot), DensePoly(ctx, rem[:db])


# =============================================================================
# Binomial Residues
# =============================================================================


def mono_mod_binomial(a: int, mod: BinomialModulus) -> tuple[int, int]:
    """
    x^a modulo x^e - h as (slot, scale) with x^a = scale * x^slot.

    Raises:
        ArgumentError: If a < 0
    """
    if a < 0:
        raise ArgumentError(f"exponent must be nonnegative, got {a}")
    return a % mod.e, mod.ctx.pow(mod.h, a // mod.e)


def _fold(coeffs: Sequence[int], mod: BinomialModulus) -> tuple[int, ...]:
    ctx = mod.ctx
    e = mod.e
    out = [0] * e
    scale = 1
    for start in range(0, len(coeffs), e):
        for i, c in enumerate(coeffs[start : start + e]):
            if c:
                out[i] = ctx.add(out[i], ctx.mul(c, scale))
        scale = ctx.mul(scale, mod.h)
    return tuple(out)


def reduce_dense(f: DensePoly, mod: BinomialModulus) -> ResiduePoly:
    """f modulo x^e - h."""
    if f.ctx != mod.ctx:
        raise ArgumentError("polynomial and modulus belong to different fields")
    return ResiduePoly(mod, _fold(f.coeffs, mod))


def residue_mul(a: ResiduePoly, b: ResiduePoly) -> ResiduePoly:
    """
    Product of two residues, folded back to length e.

    Raises:
        ArgumentError: If the residues have different moduli
    """
    if a.modulus != b.modulus:
        raise ArgumentError("residues have different moduli")
    product = poly_mul(a.as_dense(), b.as_dense())
    return ResiduePoly(a.modulus, _fold(product.coeffs, a.modulus))


def residue_add(a: ResiduePoly, b: ResiduePoly) -> ResiduePoly:
    """Coefficient-wise sum of two residues."""
    if a.modulus != b.modulus:
        raise ArgumentError("residues have different moduli")
    ctx = a.modulus.ctx
    return ResiduePoly(
        a.modulus, tuple(ctx.add(x, y) for x, y in zip(a.coeffs, b.coeffs, strict=True))
    )


def _tree_product(ctx: FieldCtx, polys: list[DensePoly]) -> DensePoly:
    layer = polys
    while len(layer) > 1:
        paired = [poly_mul(layer[i], layer[i + 1]) for i in range(0, len(layer) - 1, 2)]
        if len(layer) % 2:
            paired.append(layer[-1])
        layer = paired
    return layer[0] if layer else DensePoly.constant(ctx, 1)


def grouped_product(
    factors: Iterable[DensePoly],
    mod: BinomialModulus,
    degree_cap: int,
    meter: SpaceMeter | None = None,
) -> ResiduePoly:
    """
    Product of a factor stream modulo x^e - h, group by group.

    Factors are taken in groups of max(1, e // (degree_cap + 1)); each group
    is multiplied by a binary tree without reduction, then reduced and folded
    into the running residue.

    Args:
        factors: Polynomials of degree at most ``degree_cap``
        mod: The binomial modulus
        degree_cap: Degree bound of every factor
        meter: Optional space meter charged for the live group and residue

    Raises:
        ArgumentError: If a factor exceeds the degree cap
    """
    meter = meter or SpaceMeter()
    ctx = mod.ctx
    group_size = max(1, mod.e // (degree_cap + 1))
    words = ctx.k

    acc = ResiduePoly.one(mod)
    group: list[DensePoly] = []
    held = 0
    meter.alloc(mod.e * words)
    try:
        for f in factors:
            if f.degree > degree_cap:
                raise ArgumentError(f"factor of degree {f.degree} exceeds cap {degree_cap}")
            group.append(f)
            cost = (f.degree + 1) * words
            meter.alloc(cost)
            held += cost
            if len(group) == group_size:
                acc = residue_mul(acc, reduce_dense(_tree_product(ctx, group), mod))
                group.clear()
                meter.free(held)
                held = 0
        if group:
            acc = residue_mul(acc, reduce_dense(_tree_product(ctx, group), mod))
    finally:
        meter.free(held + mod.e * words)
    return acc


# =============================================================================
# Evaluation
# =============================================================================


def multipoint_eval(
    f: DensePoly | ResiduePoly,
    points: Sequence[int],
    meter: SpaceMeter | None = None,
) -> list[int]:
    """
    Values f(b) for every b in ``points``, in input order.

    Builds the subproduct tree of (x - b) bottom-up (an unpaired node is
    carried to the next level) and pushes remainders down it.
    """
    if isinstance(f, ResiduePoly):
        f = f.as_dense()
    if not points:
        return []
    meter = meter or SpaceMeter()
    ctx = f.ctx

    levels: list[list[DensePoly]] = [[DensePoly(ctx, (ctx.neg(b), 1)) for b in points]]
    while len(levels[-1]) > 1:
        below = levels[-1]
        above = [poly_mul(below[i], below[i + 1]) for i in range(0, len(below) - 1, 2)]
        if len(below) % 2:
            above.append(below[-1])
        levels.append(above)

    tree_words = ctx.k * sum(len(node.coeffs) for level in levels for node in level)
    with meter.hold(tree_words + ctx.k * max(len(f.coeffs), 1)):
        remainders = [poly_divmod(f, levels[-1][0])[1]]
        for level in reversed(levels[:-1]):
            remainders = [
                poly_divmod(remainders[i // 2], node)[1] for i, node in enumerate(level)
            ]
    return [r.coeffs[0] if r.coeffs else 0 for r in remainders]


def range_selector(ctx: FieldCtx, lo: int, hi: int, x: int) -> int:
    """
    Sum of x^(q-1-i) for i in [lo, hi], in closed form.

    Raises:
        FieldDomainError: If x is zero
        ArgumentError: If the range is not within [0, q - 2]
    """
    if x == 0:
        raise FieldDomainError("range selector is undefined at x = 0")
    if not 0 <= lo <= hi <= ctx.q - 2:
        raise ArgumentError(f"range [{lo}, {hi}] must lie within [0, {ctx.q - 2}]")
    if x == 1:
        return ctx.from_int(hi - lo + 1)

    head = ctx.pow(x, ctx.q - 1 - hi)
    numerator = ctx.sub(1, ctx.pow(x, hi - lo + 1))
    return ctx.mul(head, ctx.mul(numerator, ctx.inv(ctx.sub(1, x))))
