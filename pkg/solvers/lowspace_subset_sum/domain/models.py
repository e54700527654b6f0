"""Core domain models with Pydantic validation.

Instances, solver configuration and solver outcomes are immutable values so
they can be shared between bench worker threads without copying.
"""

from enum import StrEnum
from fractions import Fraction
from typing import Annotated, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationInfo,
    field_validator,
    model_validator,
)


MAX_ITEM = 2**64 - 1

CSV_COLUMNS = (
    "algo",
    "n",
    "t",
    "k",
    "eps",
    "answer",
    "seedBitsUsed",
    "peakWords",
    "wallTimeMicros",
)


class Answer(StrEnum):
    """Decision outcome."""

    YES = "YES"
    NO = "NO"

    @classmethod
    def of(cls, value: bool) -> "Answer":
        """Map a boolean verdict to an answer."""
        return cls.YES if value else cls.NO


class SubsetSumInstance(BaseModel):
    """A multiset of positive integers and a target.

    Attributes:
        items: a_1..a_n, each in [1, 2^64)
        target: t >= 1

    Example:
        >>> inst = SubsetSumInstance(items=(3, 5, 7), target=12)
        >>> inst.n
        3
    """

    model_config = ConfigDict(frozen=True)

    items: tuple[Annotated[int, Field(ge=1, le=MAX_ITEM)], ...] = Field(
        default=(), description="Positive integers a_1..a_n"
    )
    target: int = Field(ge=1, le=MAX_ITEM, description="Target sum t")

    @property
    def n(self) -> int:
        """Number of items."""
        return len(self.items)

    def normalized(self) -> "SubsetSumInstance":
        """Drop items larger than the target; they can never participate."""
        kept = tuple(a for a in self.items if a <= self.target)
        if len(kept) == len(self.items):
            return self
        return SubsetSumInstance(items=kept, target=self.target)

    def to_text(self) -> str:
        """Serialize in the instance file format."""
        return f"{self.n} {self.target}\n" + " ".join(str(a) for a in self.items) + "\n"


class SpaceSnapshot(BaseModel):
    """Frozen reading of a space meter."""

    model_config = ConfigDict(frozen=True)

    current_words: int = Field(ge=0, description="Live working-state words")
    peak_words: int = Field(ge=0, description="Running maximum of live words")

    @model_validator(mode="after")
    def peak_dominates_current(self) -> "SpaceSnapshot":
        """Peak can never be below the current reading."""
        if self.peak_words < self.current_words:
            raise ValueError("peak_words must be >= current_words")
        return self


class SolveOutcome(BaseModel):
    """Result of one solver invocation.

    Attributes:
        algo: Algorithm name as used on the command line
        answer: YES or NO
        n: Item count of the solved instance
        t: Target of the solved instance
        random_bits_used: Seed bits consumed; 0 for deterministic solvers
        space: Space meter reading after the run
        wall_time_micros: Elapsed wall time
        k: Tradeoff parameter, when relevant
        eps: Approximation parameter as "num/den", when relevant
        field_order: Order q of the field the verdict came from, when single
        batch_count: Realized batch count S of the tradeoff solver
        notes: Deviations worth recording (e.g. an overshooting divisor)
    """

    model_config = ConfigDict(frozen=True)

    algo: str
    answer: Answer
    n: int = Field(ge=0)
    t: int = Field(ge=0)
    random_bits_used: int = Field(default=0, ge=0)
    space: SpaceSnapshot
    wall_time_micros: int = Field(default=0, ge=0)
    k: int | None = None
    eps: str | None = None
    field_order: int | None = None
    batch_count: int | None = None
    notes: tuple[str, ...] = ()

    def csv_row(self, *, omit_timing: bool = False) -> list[str]:
        """Render the row in ``CSV_COLUMNS`` order."""
        return [
            self.algo,
            str(self.n),
            str(self.t),
            "" if self.k is None else str(self.k),
            self.eps or "",
            self.answer.value,
            str(self.random_bits_used),
            str(self.space.peak_words),
            "0" if omit_timing else str(self.wall_time_micros),
        ]


class HashMode(StrEnum):
    """Depth policy of the invertible hash family."""

    LOGLOG = "loglog"
    CONST = "const"


class RandConfig(BaseModel):
    """Configuration of the randomized low-space pipeline.

    Unset numeric fields are derived from the instance size and the global
    settings when the solver runs.

    Attributes:
        family_mode: LOGLOG (k = gamma*log2 n) or CONST (k = ceil(n^eps))
        load_param: Override for k
        walk_rounds: Override for the walk length c'*ceil(log2 n)
        const_eps: eps for CONST mode; defaults to settings.const_depth_eps
        strict_logspace: k^2 passes per round with O(1) accumulators
        prime_count_multiplier: Override for the prime-list multiplier
    """

    model_config = ConfigDict(frozen=True)

    family_mode: HashMode = HashMode.LOGLOG
    load_param: int | None = Field(default=None, ge=1)
    walk_rounds: int | None = Field(default=None, ge=1)
    const_eps: float | None = Field(default=None, gt=0.0, lt=1.0)
    strict_logspace: bool = False
    prime_count_multiplier: int | None = Field(default=None, ge=1)


class CoeffQuery(BaseModel):
    """Which coefficients the coefficient test asks about.

    Example:
        >>> CoeffQuery.point(12).hi
        12
    """

    model_config = ConfigDict(frozen=True)

    mode: Literal["POINT", "RANGE"]
    lo: int = Field(ge=0)
    hi: int = Field(ge=0)

    @model_validator(mode="after")
    def ordered(self) -> "CoeffQuery":
        """Reject empty ranges and malformed points."""
        if self.lo > self.hi:
            raise ValueError("lo must be <= hi")
        if self.mode == "POINT" and self.lo != self.hi:
            raise ValueError("a POINT query has lo == hi")
        return self

    @classmethod
    def point(cls, t: int) -> "CoeffQuery":
        """Query the single coefficient of x^t."""
        return cls(mode="POINT", lo=t, hi=t)

    @classmethod
    def range(cls, lo: int, hi: int) -> "CoeffQuery":
        """Query whether any coefficient in [lo, hi] is nonzero."""
        return cls(mode="RANGE", lo=lo, hi=hi)


class WssapQuery(BaseModel):
    """A weak-approximation promise instance with eps = num/den."""

    model_config = ConfigDict(frozen=True)

    inst: SubsetSumInstance
    eps_num: int = Field(ge=1)
    eps_den: int = Field(ge=2)

    @model_validator(mode="after")
    def eps_below_one(self) -> "WssapQuery":
        """Require 0 < eps < 1."""
        if self.eps_num >= self.eps_den:
            raise ValueError("eps must satisfy 0 < num < den")
        return self

    @property
    def eps(self) -> Fraction:
        """eps as an exact rational."""
        return Fraction(self.eps_num, self.eps_den)

    @property
    def eps_text(self) -> str:
        """eps rendered as "num/den"."""
        return f"{self.eps_num}/{self.eps_den}"

    @classmethod
    def parse_eps(cls, text: str) -> tuple[int, int]:
        """Parse "num/den" into a pair of integers."""
        num, sep, den = text.partition("/")
        if not sep:
            raise ValueError(f"eps must be written num/den, got {text!r}")
        return int(num), int(den)


class RoundedInstance(BaseModel):
    """Output of a weak-approximation rounding step.

    Attributes:
        items: Rounded values b_i (zeros dropped)
        lo: Lower end of the target window
        hi: Upper end of the target window
        provenance: Which reduction produced it
        scale_num: Numerator of the rounding unit N
        scale_den: Denominator of the rounding unit N
        t_prime: Rounded target (ALG1 only)
        small_sum: Sum h of the small items (ALG2 only)
        immediate_yes: Small items alone reach the window (ALG2 clamp rule)
    """

    model_config = ConfigDict(frozen=True)

    items: tuple[Annotated[int, Field(ge=1)], ...]
    lo: int = Field(ge=0)
    hi: int = Field(ge=0)
    provenance: Literal["ALG1", "ALG2"]
    scale_num: int = Field(ge=1)
    scale_den: int = Field(ge=1)
    t_prime: int | None = None
    small_sum: int = Field(default=0, ge=0)
    immediate_yes: bool = False

    @field_validator("hi")
    @classmethod
    def window_ordered(cls, v: int, info: ValidationInfo) -> int:
        """lo <= hi."""
        if "lo" in info.data and v < info.data["lo"]:
            raise ValueError("window lower end exceeds upper end")
        return v

    @property
    def scale(self) -> Fraction:
        """Rounding unit N."""
        return Fraction(self.scale_num, self.scale_den)
