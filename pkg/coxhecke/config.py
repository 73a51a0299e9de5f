import logging
from pathlib import Path
from typing import Optional
from dotenv import load_dotenv
from pydantic_settings import BaseSettings
from pydantic import Field, field_validator

# ── Load .env ────────────────────────────────────────────
BASE_DIR = Path(__file__).resolve().parent.parent
load_dotenv(BASE_DIR / ".env")


class Settings(BaseSettings):

    # ── Paths ────────────────────────────────────────────
    BASE_DIR: Path = BASE_DIR
    CACHE_DIR: Path = BASE_DIR / ".nf_cache"
    OUTPUT_DIR: Path = BASE_DIR / "out"

    # ── Search budgets ───────────────────────────────────
    NODE_BUDGET: int = Field(default=200_000, ge=1)
    SEARCH_CAP: int = Field(default=8, ge=0, le=64)
    LENGTH_CAP: int = Field(default=6, ge=0, le=64)

    # ── Normal-form cache ────────────────────────────────
    # 0 means unbounded
    NORMAL_FORM_CACHE_CAP: int = Field(default=0, ge=0)
    CACHE_ENABLED: bool = True

    # ── Execution ────────────────────────────────────────
    THREADS: int = Field(default=1, ge=1, le=64)

    # ── Artifacts ────────────────────────────────────────
    SCHEMA_VERSION: str = "coxeter-hecke/v1"

    # ── Logging ──────────────────────────────────────────
    LOG_LEVEL: str = "INFO"

    @field_validator("LOG_LEVEL")
    @classmethod
    def level_must_be_known(cls, v):
        if v.upper() not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown LOG_LEVEL: {v}")
        return v.upper()

    class Config:
        env_file = ".env"
        case_sensitive = True
        extra = "ignore"


# ── Instantiate ──────────────────────────────────────────
settings = Settings()


def resolve_cap(value: Optional[int], default: int) -> int:
    """Explicit caps win over settings; None falls back."""
    return default if value is None else value


# ── Logging ──────────────────────────────────────────────
def setup_logging() -> logging.Logger:
    log = logging.getLogger("coxhecke")
    log.setLevel(getattr(logging, settings.LOG_LEVEL.upper()))

    if not log.handlers:
        handler = logging.StreamHandler()
        formatter = logging.Formatter(
            fmt="%(asctime)s | %(levelname)-8s | %(name)s:%(funcName)s:%(lineno)d | %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )
        handler.setFormatter(formatter)
        log.addHandler(handler)

    return log


logger = setup_logging()
