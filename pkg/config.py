import os
from pathlib import Path

import psutil
from dotenv import load_dotenv

load_dotenv()


def _int_env(name, default):
    raw = os.getenv(name, str(default)).strip().strip('"').strip("'")
    try:
        return int(raw)
    except ValueError as e:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from e


def _float_env(name, default):
    raw = os.getenv(name, str(default)).strip().strip('"').strip("'")
    try:
        return float(raw)
    except ValueError as e:
        raise ValueError(f"{name} must be a number, got {raw!r}") from e


def _default_threads():
    return psutil.cpu_count(logical=True) or os.cpu_count() or 1


# Parallelism
MAGICLAB_THREADS = _int_env('MAGICLAB_THREADS', _default_threads())  # census / classification workers

# Logging
LOG_LEVEL = os.getenv('MAGICLAB_LOG_LEVEL', 'INFO').upper()
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

# Numeric tolerances
EIGEN_TOL = _float_env('MAGICLAB_EIGEN_TOL', 1e-8)  # relative residual for eigenpairs
DURER_SPECTRUM_RTOL = 5e-3    # published spectra are rounded to 2 decimals
TYPE_B_SPECTRUM_RTOL = 5e-4   # ... or to 4 decimals
EIGENVECTOR_RTOL = 1e-6       # transported eigenvector after normalization

# Random synthesis
COEFF_BOUND = _int_env('MAGICLAB_COEFF_BOUND', 9)  # coefficients drawn from [-bound, bound]

# Fixtures
BASE_DIR = Path(__file__).resolve().parent
FIXTURES_DIR = Path(os.getenv('MAGICLAB_FIXTURES_DIR', str(BASE_DIR / 'fixtures')))

# Testing
PROPERTY_EXAMPLES = _int_env('MAGICLAB_PROPERTY_EXAMPLES', 10000)  # hypothesis examples per suite
VERIFY_PROPERTY_CASES = _int_env('MAGICLAB_VERIFY_CASES', 10000)  # constructed squares per verify property check

# Census
CENSUS_ORDERS = (3, 4)
STREAMING_ORDERS = (5,)       # count-only, behind an explicit flag
