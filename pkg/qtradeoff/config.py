# qtradeoff/config.py
import logging
import os
import sys

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _int_setting(name: str, default: int, minimum: int = 1) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


# Sampling / search defaults
DEFAULT_SEED = _int_setting("QTRADEOFF_SEED", 42, minimum=0)
VERIFY_SAMPLES = _int_setting("QTRADEOFF_VERIFY_SAMPLES", 100_000)
SIMPLEX_GRID = _int_setting("QTRADEOFF_SIMPLEX_GRID", 60)
DIRECTION_GRID = _int_setting("QTRADEOFF_DIRECTION_GRID", 1)
REFINE_STEPS = _int_setting("QTRADEOFF_REFINE_STEPS", 2, minimum=0)
MC_CHUNK = _int_setting("QTRADEOFF_MC_CHUNK", 16_384)
WORKERS = _int_setting("QTRADEOFF_WORKERS", 4)
LOG_LEVEL = os.getenv("QTRADEOFF_LOG_LEVEL", "WARNING").upper()

if DEFAULT_SEED >= 2**64:
    raise ValueError("QTRADEOFF_SEED must fit in 64 bits")

# Numerical tolerances
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-12
PROB_TOL = 1e-12
UNIT_TOL = 1e-12
DIRECTION_RENORM_TOL = 1e-6
ROTATION_TOL = 1e-10
BOUNDARY_TOL = 1e-12
CP_TOL = 1e-9
ZERO_P_TOL = 1e-14
JACOBI_TOL = 1e-14
CLI_PROB_TOL = 1e-9

# Output
SIGNIFICANT_DIGITS = 12

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_DATEFMT = "%Y-%m-%d %H:%M:%S"


def configure_logging(level: str = LOG_LEVEL) -> None:
    """Route all log records to stderr; stdout is reserved for data."""
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, level, logging.WARNING),
        format=LOG_FORMAT,
        datefmt=LOG_DATEFMT,
        force=True,
    )
