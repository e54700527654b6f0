"""
Configuration management using Pydantic Settings.

Every tunable constant of the solver suite lives here: the load and walk
constants of the randomized solver, the prime-count multipliers of the
coefficient test, bench parallelism and logging options. All settings can be
overridden through ``LOWSS_``-prefixed environment variables or a ``.env``
file.
"""

import logging
from typing import Literal

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Solver settings with environment variable validation.

    Example:
        >>> import os
        >>> os.environ["LOWSS_THREADS"] = "4"
        >>> Settings().threads
        4
    """

    model_config = SettingsConfigDict(
        env_prefix="LOWSS_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        validate_default=True,
    )

    # =========================================================================
    # Execution
    # =========================================================================

    threads: int = Field(
        default=1, ge=1, le=256, description="Upper bound on worker threads used by bench"
    )

    # =========================================================================
    # Randomized solver constants
    # =========================================================================

    load_gamma: float = Field(
        default=4.0,
        gt=0.0,
        description="Load constant: loadParam k = ceil(gamma * log2 n) in LOGLOG mode",
    )

    walk_multiplier: int = Field(
        default=4, ge=1, description="Walk rounds per bin: c' * ceil(log2 n)"
    )

    coefficient_bits_multiplier: int = Field(
        default=2, ge=1, description="c_w in w = min(n, t) * k^2 * ceil(log2 n) * c_w"
    )

    hash_independence_multiplier: int = Field(
        default=1, ge=1, description="Scales the independence order of each hash level"
    )

    const_depth_eps: float = Field(
        default=0.5,
        gt=0.0,
        lt=1.0,
        description="Exponent eps of the constant-depth hash mode (loadParam = ceil(n^eps))",
    )

    # =========================================================================
    # Coefficient test constants
    # =========================================================================

    prime_count_multiplier: int = Field(
        default=100, ge=1, description="Prime-list length multiplier for the randomized test"
    )

    deterministic_prime_multiplier: int = Field(
        default=1, ge=1, description="Prime-list length multiplier for the deterministic test"
    )

    degree_multiplier: int = Field(
        default=8, ge=1, description="c_d in the star-product solver degree bound c_d * t * L"
    )

    # =========================================================================
    # Polynomial arithmetic
    # =========================================================================

    schoolbook_cutoff: int = Field(
        default=32, ge=1, description="Operand length below which schoolbook multiplication runs"
    )

    # =========================================================================
    # Feature Flags
    # =========================================================================

    enable_metrics: bool = Field(default=True, description="Enable solver metrics collection")

    enable_structured_logging: bool = Field(
        default=True, description="Configure structlog on import"
    )

    # =========================================================================
    # Logging Configuration
    # =========================================================================

    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = Field(
        default="WARNING", description="Logging level"
    )

    log_format: Literal["json", "console", "text"] = Field(
        default="console",
        description="Log output format (json for pipelines, console for terminals)",
    )

    log_file: str | None = Field(default=None, description="Path to log file (None = stderr only)")

    log_max_bytes: int = Field(
        default=10_485_760,  # 10 MB
        gt=0,
        description="Maximum log file size before rotation (bytes)",
    )

    log_backup_count: int = Field(default=5, ge=0, description="Rotated log files to keep")

    # =========================================================================
    # Validators
    # =========================================================================

    @field_validator("log_level", mode="before")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Accept log levels in any case."""
        return v.upper() if isinstance(v, str) else v

    # =========================================================================
    # Helper Methods
    # =========================================================================

    def get_logging_level(self) -> int:
        """
        Get Python logging level constant.

        Returns:
            Logging level constant (e.g., logging.INFO)
        """
        level: int = getattr(logging, self.log_level)
        return level


# =========================================================================
# Singleton Instance
# =========================================================================

settings = Settings()


def get_settings() -> Settings:
    """
    Get the global settings instance.

    Returns:
        Global Settings instance
    """
    return settings


def reload_settings() -> Settings:
    """
    Reload settings from environment variables.

    Existing modules keep reading ``settings`` through this module, so the
    reloaded values take effect on their next access.

    Returns:
        New Settings instance
    """
    global settings
    settings = Settings()
    return settings
