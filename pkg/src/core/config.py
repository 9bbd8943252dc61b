from functools import lru_cache
from typing import Optional

from loguru import logger
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(env_file=".env", extra="ignore", populate_by_name=True)

    # General settings
    app_name: str = "PrInDT"
    log_level: str = Field(default="INFO", alias="PRINDT_LOG_LEVEL")
    log_file: Optional[str] = Field(default=None, alias="PRINDT_LOG_FILE")

    # Training run settings
    n_jobs: int = Field(default=1, alias="PRINDT_N_JOBS")  # worker processes for repetitions
    histogram_bins: int = Field(default=20, alias="PRINDT_HISTOGRAM_BINS")
    top_dot: int = Field(default=3, alias="PRINDT_TOP_DOT")  # DOT files written by `train`

    @field_validator("log_level", mode="before")
    @classmethod
    def _normalize_log_level(cls, v: object) -> str:
        """Accept log levels in any case."""
        if not v:
            logger.warning("Empty PRINDT_LOG_LEVEL, using INFO")
            return "INFO"
        return str(v).strip().upper()

    @field_validator("n_jobs", "histogram_bins")
    @classmethod
    def _positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be a positive integer")
        return v

    @field_validator("top_dot")
    @classmethod
    def _non_negative(cls, v: int) -> int:
        if v < 0:
            raise ValueError("must not be negative")
        return v


@lru_cache
def get_settings() -> Settings:
    """Get application settings singleton."""
    # Clear cache if needed for testing: get_settings.cache_clear()
    return Settings()
