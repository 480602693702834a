import os

from dotenv import load_dotenv

# load environment variables from .env file
load_dotenv()


def _env_flag(name: str, default: str = "False") -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes")


class Config(object):
    # 1. ENVIRONMENT variables

    VERSION = "1.0.0"
    TESTING = _env_flag("TESTING")

    # Logging
    LOG_LEVEL = os.getenv("CWREACH_LOG_LEVEL", "INFO")

    # Central body (Earth) constants, km and s
    EARTH_MU = float(os.getenv("CWREACH_EARTH_MU", "398600.4418"))
    EARTH_RADIUS = float(os.getenv("CWREACH_EARTH_RADIUS", "6378.137"))

    # Parallelism cap for map cells and sweeps
    THREADS = max(1, int(os.getenv("CWREACH_THREADS", str(os.cpu_count() or 1))))

    # Output
    OUTPUT_DIRECTORY = os.getenv("CWREACH_OUTPUT_DIR", "outputs")
    MANIFEST_FILENAME = "manifest.yaml"
    CSV_FLOAT_FORMAT = "%.17e"

    # 2. TRANSFER CONDITIONING

    # Inversion-based operations accept dt in [GUARD_MIN_DT, pi/kappa - GUARD_EDGE_MARGIN]
    GUARD_MIN_DT = float(os.getenv("CWREACH_GUARD_MIN_DT", "1.0"))
    GUARD_EDGE_MARGIN = float(os.getenv("CWREACH_GUARD_EDGE_MARGIN", "1.0"))
    MAX_CONDITION = 1e12
    CFM_EPSILON = float(os.getenv("CWREACH_EPSILON", "1.0"))

    # 3. NUMERICAL TOLERANCES

    SYMMETRY_TOL = 1e-9
    JACOBI_TOL = 1e-12
    JACOBI_MAX_SWEEPS = 100
    ZERO_EIGEN_REL = 1e-9
    ENDPOINT_TOL = 1e-9
    INVERSION_TOL = 1e-6
    INVERSION_SEED_GRID = 100
    DENSE_SAMPLES = 2000
    SAMPLING_GUARD_KM = float(os.getenv("CWREACH_SAMPLING_GUARD_KM", "1e-3"))
    CONSTRAINT_RESOLUTION = 10.0

    # 4. PLANNERS

    CFK_TIME_STEP = 10.0
    CFK_BETA_STEP = 1.0
    CFK_MIN_SAMPLES = 200
    FULL_COVERAGE_GAP_DEG = 5.0
    CFM_SWEEP_SAMPLES = 500
    REACH_SURFACE_T_RES = 60
    REACH_SURFACE_DT_RES = 60
