import logging
import os

from src.exceptions import ConfigError

logger = logging.getLogger(__name__)

# Defaults
DEFAULT_N_DISKS = 5
DEFAULT_FAILURE_RATE = 1e-4  # per hour, p(10000 h) = e^-1
DEFAULT_T_GRID = "0:10000:100"
DEFAULT_TRIALS = 100_000
DEFAULT_SEED = 42
DEFAULT_MAX_EXACT_DISKS = 24
DEFAULT_LOG_LEVEL = "WARNING"
REPORT_SIGNIFICANT_DIGITS = 12

MAX_EXACT_DISKS_ENV = "RAIDLAY_MAX_EXACT_DISKS"
LOG_LEVEL_ENV = "RAIDLAY_LOG_LEVEL"


def max_exact_disks() -> int:
    """Largest disk count for which scenarios are enumerated exhaustively."""
    raw = os.environ.get(MAX_EXACT_DISKS_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_EXACT_DISKS

    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{MAX_EXACT_DISKS_ENV} must be an integer, got {raw!r}")

    if value < 1:
        raise ConfigError(f"{MAX_EXACT_DISKS_ENV} must be positive, got {value}")

    logger.debug(f"Exact enumeration limit overridden to {value} disks")
    return value


def log_level() -> str:
    return os.environ.get(LOG_LEVEL_ENV, DEFAULT_LOG_LEVEL).upper()
