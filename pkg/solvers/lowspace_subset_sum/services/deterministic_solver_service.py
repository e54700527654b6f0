"""
Deterministic low-space solver built on approximate counting.

Each layer's subsets are tracked by a polynomial in an auxiliary variable y
whose exponent approximates log_(1+eps) of the subset size. Combining two
halves with the star product keeps that exponent within 1 + log2(m) of the
truth, so capping it keeps every subset of size <= z while discarding
subsets far larger than z. The product over layers then has degree O(t log n)
and contains x^t iff the instance is YES.
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..coefficient_test import Evaluator, coeff_test_deterministic
from ..config import get_settings
from ..domain.exceptions import ArgumentError
from ..domain.models import CoeffQuery, SolveOutcome, SubsetSumInstance
from ..fields import FieldCtx
from ..instances import dp_oracle
from ..logging import get_logger
from ..metrics import SpaceMeter
from .base import solver_run
from .randomized_solver_service import layer_count, layer_of


logger = get_logger(__name__)


# =============================================================================
# Exponent arithmetic
# =============================================================================


@lru_cache(maxsize=65536)
def u_exponent(i: int, j: int, eps: Fraction) -> int:
    """
    The integer u with (1+eps)^u >= (1+eps)^i + (1+eps)^j > (1+eps)^(u-1).

    Decided in exact rational arithmetic.

    Raises:
        ArgumentError: If i or j is below 1
    """
    if i < 1 or j < 1:
        raise ArgumentError(f"star exponents start at 1, got ({i}, {j})")
    base = 1 + eps
    bound = base**i + base**j
    u = max(i, j) + 1
    power = base**u
    while power < bound:
        u += 1
        power *= base
    return u


def ceil_log(value: int, base: Fraction) -> int:
    """Smallest c >= 0 with base^c >= value."""
    c = 0
    power = Fraction(1)
    while power < value:
        c += 1
        power *= base
    return c


def floor_log(value: int, base: Fraction) -> int:
    """Largest c >= 0 with base^c <= value (value >= 1)."""
    c = 0
    power = base
    while power <= value:
        c += 1
        power *= base
    return c


def counting_eps(m: int) -> Fraction:
    """eps = 1 / ceil(log2 m), and 1 when m <= 2."""
    depth = (m - 1).bit_length() if m > 1 else 0
    return Fraction(1, max(1, depth))


def cap_exponent(m: int, eps: Fraction) -> int:
    """1 + ceil(log_(1+eps) m) + ceil(log2 m)."""
    return 1 + ceil_log(m, 1 + eps) + ((m - 1).bit_length() if m > 1 else 0)


# =============================================================================
# Star polynomials
# =============================================================================


@dataclass(frozen=True, slots=True)
class StarPoly:
    """Polynomial in y whose coefficients are field elements (x already substituted).

    Attributes:
        ctx: Field of the coefficients
        eps: Approximation parameter of the star product
        cap_exp: Highest y-exponent kept
        coeffs: cap_exp + 1 coefficients, y^0 first
    """

    ctx: FieldCtx
    eps: Fraction
    cap_exp: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.cap_exp + 1:
            raise ArgumentError(
                f"need {self.cap_exp + 1} y-coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def one(cls, ctx: FieldCtx, eps: Fraction, cap_exp: int) -> "StarPoly":
        return cls(ctx, eps, cap_exp, (1,) + (0,) * cap_exp)

    @classmethod
    def leaf(cls, ctx: FieldCtx, eps: Fraction, cap_exp: int, value: int) -> "StarPoly":
        """1 + y * value."""
        if cap_exp < 1:
            raise ArgumentError("a leaf needs cap_exp >= 1")
        return cls(ctx, eps, cap_exp, (1, value) + (0,) * (cap_exp - 1))

    @property
    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def words(self) -> int:
        return (self.cap_exp + 1) * self.ctx.k


def star_product(p: StarPoly, q: StarPoly) -> StarPoly:
    """
    P * Q = 1 + (P - 1) + (Q - 1) + sum_{i,j >= 1} P_i Q_j y^u(i,j).

    Terms landing above cap_exp are dropped; u is increasing in both
    arguments so they never come back below the cap.

    Raises:
        ArgumentError: On mismatched field, eps or cap
    """
    if p.ctx != q.ctx or p.eps != q.eps or p.cap_exp != q.cap_exp:
        raise ArgumentError("star product operands disagree on field, eps or cap")
    if q.is_one:
        return p
    if p.is_one:
        return q

    ctx = p.ctx
    out = [1] + [ctx.add(a, b) for a, b in zip(p.coeffs[1:], q.coeffs[1:], strict=True)]
    for i in range(1, p.cap_exp + 1):
        pi = p.coeffs[i]
        if not pi:
            continue
        for j in range(1, q.cap_exp + 1):
            qj = q.coeffs[j]
            if not qj:
                continue
            u = u_exponent(i, j, p.eps)
            if u > p.cap_exp:
                break
            out[u] = ctx.add(out[u], ctx.mul(pi, qj))
    return StarPoly(ctx, p.eps, p.cap_exp, tuple(out))


# =============================================================================
# Approximate counting
# =============================================================================


def approx_count(
    ctx: FieldCtx,
    x: int,
    items: Sequence[int],
    z: int,
    member: Callable[[int], bool] | None = None,
    eps: Fraction | None = None,
    meter: SpaceMeter | None = None,
) -> int:
    """
    Sum over kept subsets S of x^(sum S).

    Every member subset of size <= z is kept, and no subset much larger than
    z survives the cap. Items failing ``member`` enter as the constant leaf 1.

    Args:
        ctx: Field
        x: Evaluation point
        items: The whole item stream; its length m fixes eps and the cap
        z: Size that must be counted exactly
        member: Layer filter; all items count when None
        eps: Override for 1 / ceil(log2 m)
        meter: Optional space meter

    Raises:
        ArgumentError: If z < 1
    """
    if z < 1:
        raise ArgumentError(f"z must be >= 1, got {z}")
    meter = meter or SpaceMeter()
    m = len(items)
    if m == 0:
        return 1

    eps = eps if eps is not None else counting_eps(m)
    cap = cap_exponent(m, eps)
    keep = min(cap, 1 + ((m - 1).bit_length() if m > 1 else 0) + floor_log(z, 1 + eps))

    def build(lo: int, hi: int) -> StarPoly:
        if hi - lo == 1:
            a = items[lo]
            if member is not None and not member(a):
                return StarPoly.one(ctx, eps, cap)
            return StarPoly.leaf(ctx, eps, cap, ctx.pow(x, a))
        mid = lo + (hi - lo + 1) // 2
        left = build(lo, mid)
        with meter.hold(left.words()):
            right = build(mid, hi)
        return star_product(left, right)

    root = build(0, m)
    with meter.hold(root.words()):
        total = 0
        for c in root.coeffs[: keep + 1]:
            total = ctx.add(total, c)
    return total


def evaluate2(
    ctx: FieldCtx,
    x: int,
    inst: SubsetSumInstance,
    meter: SpaceMeter | None = None,
) -> int:
    """Product over layers i of approx_count on layer i with z = 2^i."""
    meter = meter or SpaceMeter()
    items = inst.items
    if not items:
        return 1
    layers = layer_count(inst.n)
    t = inst.target
    result = 1
    with meter.hold(ctx.k):
        for i in range(1, layers + 1):

            def member(a: int, i: int = i) -> bool:
                return layer_of(a, t, i, layers)

            result = ctx.mul(result, approx_count(ctx, x, items, 1 << i, member, meter=meter))
    return result


def star_evaluator(inst: SubsetSumInstance) -> Evaluator:
    """
    evaluate2 with d = max(t, min(sum a_i, c_d t L)) and w = min(n, d L).
    """
    layers = layer_count(inst.n)
    t = inst.target
    c_d = get_settings().degree_multiplier
    degree = max(t, min(sum(inst.items), c_d * t * layers))

    def evaluate(ctx: FieldCtx, x: int, meter: SpaceMeter) -> int:
        return evaluate2(ctx, x, inst, meter)

    return Evaluator(
        evaluate=evaluate,
        degree=degree,
        coeff_bits=max(1, min(inst.n, degree * layers)),
    )


class DeterministicSolverService:
    """Exact deterministic solver; no random bits.

    Example:
        >>> DeterministicSolverService().solve(SubsetSumInstance(items=(3, 5, 7), target=12)).answer
        <Answer.YES: 'YES'>
    """

    algo = "det-star"

    def __init__(self, prime_multiplier: int | None = None):
        self.prime_multiplier = prime_multiplier

    def solve(self, inst: SubsetSumInstance) -> SolveOutcome:
        inst = inst.normalized()
        with solver_run(self.algo, inst) as run:
            if inst.n > 1 and inst.target < math.log2(inst.n):
                logger.debug("small_target_fallback", n=inst.n, t=inst.target)
                with run.meter.hold(1):
                    answer = dp_oracle(inst)
                return run.finish(answer, notes=("small target: dynamic program",))

            answer = coeff_test_deterministic(
                star_evaluator(inst),
                CoeffQuery.point(inst.target),
                self.prime_multiplier,
                run.meter,
            )
            return run.finish(answer)
