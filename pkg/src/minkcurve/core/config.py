"""Runtime configuration read from the environment (.env supported)."""

import os
from dotenv import load_dotenv
load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    # Safeguard
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return value


# Environment variables
MINK_THREADS = _int_env("MINK_THREADS", 0)  # 0 = auto
MINK_LOG_LEVEL = os.getenv("MINK_LOG_LEVEL", "INFO").upper()
MINK_LOG_PATH = os.getenv("MINK_LOG_PATH")

# Numeric defaults
DEFAULT_SAMPLES = 1024
DEFAULT_GRID = (512, 64)
DEFAULT_MESH_H = 0.05
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 50
EPS_SAFE = 1e-6
REJECTION_LIMIT = 1000


def thread_count() -> int:
    """Number of worker threads; MINK_THREADS=0 means one per CPU."""
    if MINK_THREADS > 0:
        return MINK_THREADS
    return os.cpu_count() or 1
