"""Process-level settings read from the environment (and an optional .env file)."""

import logging
import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

from calogero_sphere.errors import InvalidParameterError

LOG_LEVEL_ENV = "CALOGERO_LOG_LEVEL"
FD_STEP_ENV = "CALOGERO_FD_STEP"

DEFAULT_LOG_LEVEL = "WARNING"
DEFAULT_FD_STEP = 1e-5

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


@dataclass(frozen=True)
class Settings:
    """
    Settings shared by the CLI and the numerical defaults.

    Attributes:
        log_level: Name of the root log level (e.g. "INFO")
        fd_step: Default finite-difference step for gradients and brackets
    """

    log_level: str = DEFAULT_LOG_LEVEL
    fd_step: float = DEFAULT_FD_STEP


def load_settings(dotenv_path: Optional[str] = None) -> Settings:
    """
    Read settings from the environment, loading a .env file first if present.

    Variables already set in the environment take precedence over the .env file.

    Args:
        dotenv_path: Explicit .env path (optional; default search otherwise)

    Returns:
        Settings: Validated settings

    Raises:
        InvalidParameterError: If a variable cannot be parsed or is out of range
    """
    load_dotenv(dotenv_path=dotenv_path, override=False)

    log_level = os.getenv(LOG_LEVEL_ENV, DEFAULT_LOG_LEVEL).strip().upper()
    if not isinstance(logging.getLevelName(log_level), int):
        raise InvalidParameterError(f"Unknown log level in {LOG_LEVEL_ENV}: {log_level}")

    return Settings(log_level=log_level, fd_step=fd_step_from_env())


def fd_step_from_env() -> float:
    """
    Finite-difference step from CALOGERO_FD_STEP, or DEFAULT_FD_STEP when unset.

    Reads the current environment only; load_settings() loads the .env file.

    Raises:
        InvalidParameterError: If the value is not a positive number
    """
    raw_step = os.getenv(FD_STEP_ENV)
    if raw_step is None or not raw_step.strip():
        return DEFAULT_FD_STEP
    try:
        fd_step = float(raw_step)
    except ValueError as e:
        raise InvalidParameterError(f"{FD_STEP_ENV} is not a number: {raw_step!r}") from e
    if not fd_step > 0:
        raise InvalidParameterError(f"{FD_STEP_ENV} must be positive, got {fd_step}")
    return fd_step


def configure_logging(settings: Settings) -> None:
    """Attach a stderr handler to the root logger at the configured level."""
    logging.basicConfig(level=settings.log_level, format=LOG_FORMAT, force=True)
