"""
Instance handling: parsing, generation, brute-force oracles and the
range/search reductions every solver can be wrapped with.
"""

import re
from collections.abc import Iterator
from pathlib import Path

from .domain.exceptions import ArgumentError, DeciderFaultError, InstanceParseError
from .domain.models import MAX_ITEM, Answer, SubsetSumInstance
from .domain.protocols import BitSource, Decider
from .logging import get_logger


logger = get_logger(__name__)

_TOKEN = re.compile(rb"\S+")
_INTEGER = re.compile(rb"[+-]?[0-9]+")


# =============================================================================
# Parsing
# =============================================================================


def _tokens(data: bytes) -> Iterator[tuple[bytes, int, int]]:
    for line_no, line in enumerate(data.split(b"\n"), start=1):
        for match in _TOKEN.finditer(line):
            yield match.group(), line_no, match.start() + 1


def _integer(token: bytes, line: int, column: int) -> int:
    if not _INTEGER.fullmatch(token):
        text = token.decode(errors="replace")
        raise InstanceParseError(f"malformed token {text!r}", line, column)
    return int(token)


def parse_instance(data: bytes | str) -> SubsetSumInstance:
    """
    Parse "n t" followed by n whitespace-separated positive integers.

    Args:
        data: Instance text

    Returns:
        The parsed instance (not normalized)

    Raises:
        InstanceParseError: On a malformed token, an item count mismatch, a
            nonpositive value or a value beyond 64 bits, naming line and column

    Example:
        >>> parse_instance("3 12\\n3 5 7").items
        (3, 5, 7)
    """
    raw = data.encode() if isinstance(data, str) else data
    tokens = _tokens(raw)

    first = next(tokens, None)
    second = next(tokens, None)
    if first is None or second is None:
        raise InstanceParseError("missing header 'n t'", 1, 1)
    n_tok, n_line, n_col = first
    t_tok, t_line, t_col = second

    n = _integer(n_tok, n_line, n_col)
    if n < 0:
        raise InstanceParseError("negative item count", n_line, n_col)
    target = _integer(t_tok, t_line, t_col)
    if target <= 0:
        raise InstanceParseError("nonpositive value", t_line, t_col)
    if target > MAX_ITEM:
        raise InstanceParseError("value exceeds the 64-bit range", t_line, t_col)

    items: list[int] = []
    last_line, last_col = t_line, t_col
    for token, line, column in tokens:
        if len(items) == n:
            raise InstanceParseError(f"n mismatch: more than {n} items", line, column)
        value = _integer(token, line, column)
        if value <= 0:
            raise InstanceParseError("nonpositive value", line, column)
        if value > MAX_ITEM:
            raise InstanceParseError("value exceeds the 64-bit range", line, column)
        items.append(value)
        last_line, last_col = line, column

    if len(items) != n:
        raise InstanceParseError(
            f"n mismatch: expected {n} items, found {len(items)}", last_line, last_col
        )
    return SubsetSumInstance(items=tuple(items), target=target)


def read_instance(path: Path) -> SubsetSumInstance:
    """Parse an instance file."""
    return parse_instance(path.read_bytes())


# =============================================================================
# Generation
# =============================================================================


def generate_instance(
    n: int,
    t_max: int,
    tape: BitSource,
    density: float = 1.0,
    planted: bool = False,
) -> SubsetSumInstance:
    """
    Reproducible random instance.

    Items are uniform in [1, max(1, round(density * t_max))]. The target is
    uniform in [1, t_max], or, when ``planted``, the sum of a random
    nonempty subset of the items.

    Raises:
        ArgumentError: On n < 0, t_max < 1 or density outside (0, 1]
    """
    if n < 0 or t_max < 1:
        raise ArgumentError(f"need n >= 0 and tMax >= 1, got n={n}, tMax={t_max}")
    if not 0.0 < density <= 1.0:
        raise ArgumentError(f"density must be in (0, 1], got {density}")

    ceiling = max(1, round(density * t_max))
    items = tuple(1 + tape.draw_index(ceiling) for _ in range(n))

    if planted and items:
        chosen = [a for a in items if tape.read_bits(1)]
        target = sum(chosen) if chosen else items[tape.draw_index(n)]
    else:
        target = 1 + tape.draw_index(t_max)

    return SubsetSumInstance(items=items, target=target)


# =============================================================================
# Oracles
# =============================================================================


def _reachable(items: tuple[int, ...], limit: int) -> int:
    """Bitset of subset sums in [0, limit]."""
    mask = (1 << (limit + 1)) - 1
    bits = 1
    for a in items:
        if a <= limit:
            bits |= (bits << a) & mask
    return bits


def dp_oracle(inst: SubsetSumInstance) -> Answer:
    """Bellman's bitset dynamic program: YES iff some subset sums to t."""
    return Answer.of(bool(_reachable(inst.items, inst.target) >> inst.target & 1))


def dp_oracle_range(inst: SubsetSumInstance, lo: int, hi: int) -> Answer:
    """
    YES iff some subset sum lies in [lo, hi].

    Raises:
        ArgumentError: If lo < 0 or lo > hi
    """
    if lo < 0 or lo > hi:
        raise ArgumentError(f"need 0 <= lo <= hi, got lo={lo}, hi={hi}")
    return Answer.of(bool(_reachable(inst.items, hi) >> lo))


# =============================================================================
# Reductions
# =============================================================================


def pad_for_range(inst: SubsetSumInstance, t_prime: int) -> SubsetSumInstance:
    """
    Append numbers whose subset sums are exactly 0..t - t', so that hitting t
    exactly is equivalent to some original subset sum lying in [t', t].

    Raises:
        ArgumentError: If t' is outside [1, t]
    """
    if not 1 <= t_prime <= inst.target:
        raise ArgumentError(f"tPrime must lie in [1, {inst.target}], got {t_prime}")
    gap = inst.target - t_prime
    if gap == 0:
        return inst

    levels = (gap + 1).bit_length() - 1
    padding = [1 << i for i in range(levels)]
    tail = gap - (1 << levels) + 1
    if tail:
        padding.append(tail)
    return SubsetSumInstance(items=inst.items + tuple(padding), target=inst.target)


def reconstruct_solution(inst: SubsetSumInstance, decider: Decider) -> list[int] | None:
    """
    Recover a solution from any decision procedure by suffix self-reduction.

    Returns:
        1-based indices of a subset summing to t, or None when the decider
        answers NO on the instance

    Raises:
        DeciderFaultError: If the decider said YES but no completion exists
    """
    if decider(inst) is Answer.NO:
        return None

    remaining = inst.target
    chosen: list[int] = []
    for i, a in enumerate(inst.items, start=1):
        if a == remaining:
            chosen.append(i)
            logger.debug("solution_reconstructed", size=len(chosen))
            return chosen
        if a < remaining:
            suffix = SubsetSumInstance(items=inst.items[i:], target=remaining - a)
            if decider(suffix) is Answer.YES:
                chosen.append(i)
                remaining -= a

    logger.error("decider_fault", target=inst.target, chosen=chosen, remaining=remaining)
    raise DeciderFaultError(
        f"decider answered YES but no completion was found (residual target {remaining})"
    )
