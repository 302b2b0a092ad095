"""
Configuration settings for the PIP toolkit.

Defaults follow the desk-scale reproduction of the simulation and replication studies:
- Two-sample studies: 1000 runs per scenario, repeated 5-fold CV with 10 repeats
- Expected PIP and conditional oracle: 10^5 Monte-Carlo draws
- Gradient boosting: 50 trees, interaction depth 2, shrinkage 0.1, 2 obs per node
Environment variables (or a .env file, see env_template.txt) override the marked values.
"""

import os

from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return default
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"Environment variable {name} must be an integer, got {value!r}")


# Reproducibility (env: PIP_DEFAULT_SEED)
DEFAULT_SEED = _env_int("PIP_DEFAULT_SEED", 20220101)

# Worker threads for study runners (env: PIP_THREADS)
DEFAULT_THREADS = _env_int("PIP_THREADS", 1)

# Logging (env: PIP_LOG_LEVEL, PIP_LOG_FILE)
LOG_LEVEL = os.getenv("PIP_LOG_LEVEL", "WARNING").upper()
LOG_FILE = os.getenv("PIP_LOG_FILE") or None
LOG_FORMAT = "%(name)s - %(message)s"
FILE_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Monte-Carlo sizes (env: PIP_N_MC, PIP_N_T)
DEFAULT_N_MC = _env_int("PIP_N_MC", 100_000)
DEFAULT_N_T = _env_int("PIP_N_T", 100_000)
MC_BLOCK_SIZE = 65_536  # draws per sub-stream block; fixes the MC partition

# Plug-in numerics
QUAD_POINTS = 64
COVARIANCE_TOLERANCE = 1e-8  # most negative eigenvalue accepted as PSD
RANK_TOLERANCE = 1e-10  # relative |R_ii| threshold for rank deficiency
STUDENT_T_NEWTON_STEPS = 2

# Resampling defaults
DEFAULT_K = 5
DEFAULT_REPEATS = 10
DEFAULT_ALPHA = 0.05
DEFAULT_SPLIT_RATIO = 0.5

# Gradient boosting defaults (fixed hyperparameters of the nonlinear study)
GBM_N_TREES = 50
GBM_INTERACTION_DEPTH = 2
GBM_SHRINKAGE = 0.1
GBM_MIN_OBS_PER_NODE = 2

# Nonlinear generator
NONLINEAR_NOISE_SD = 1.6
NONLINEAR_NULL_COVARIATES = ["x1", "x2", "x3"]
NONLINEAR_FULL_COVARIATES = ["x1", "x2", "x3", "x4", "x5"]

# Two-sample studies
TWO_SAMPLE_GROUP_COLUMN = "x"
SIGNIFICANCE_LEVEL = 0.05
DEFAULT_RUNS = 1000

# Replication studies
SEED_SEARCH_TOLERANCE = 0.0005
SEED_SEARCH_MAX_ATTEMPTS = 20_000

# Output
FLOAT_DECIMALS = 6
RECORD_COLUMNS = [
    "scenario", "run", "n", "beta1", "estimator", "estimate",
    "lower", "upper", "p_value", "delta_mse", "seed",
]
RECORDS_FILE = "records.csv"
DECISION_TABLE_FILE = "decision_table.json"

# Rich console styling
STYLE_SUCCESS = "green"
STYLE_ERROR = "red"
STYLE_WARNING = "yellow"
STYLE_HEADER = "bold cyan"
