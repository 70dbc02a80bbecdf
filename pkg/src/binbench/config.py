"""Centralized tuning parameters for binbench.

All tolerances, budgets, and limits that affect solver behaviour and
experiment reproducibility are collected here so they can be adjusted in
one place.
"""

import os
from pathlib import Path


def get_data_dir() -> Path:
    """Return the binbench data directory.

    Resolution: BINBENCH_DATA_DIR env var > ~/.binbench (default).
    This is a function (not a constant) so it reads the env var at call time,
    after CLI flags have had a chance to set it.
    """
    return Path(os.environ.get("BINBENCH_DATA_DIR", str(Path.home() / ".binbench")))


# ── Sizes ────────────────────────────────────────────────────────────────
CONTINUOUS_DEN = 10**9             # Denominator for quantized continuous sizes

# ── Linear programming ───────────────────────────────────────────────────
LP_PIVOT_TOL = 1e-9                # Smallest pivot element accepted by the ratio test
LP_COST_TOL = 1e-9                 # Reduced cost below -tol makes a column eligible
LP_PRIMAL_TOL = 1e-9               # Primal residual allowed per row, scaled by 1+|rhs|
LP_SLACKNESS_TOL = 1e-7            # Complementary slackness residual
LP_PHASE1_TOL = 1e-7               # Phase-one objective above tol*(1+max|rhs|) means infeasible
LP_BLAND_FACTOR = 5                # Switch to Bland after factor*(rows+cols) degenerate pivots
LP_MAX_ITERATIONS = 50_000         # Hard cap on pivots per phase
LP_REFACTOR_PIVOTS = 200           # Refactor a kept tableau from its basis after this many pivots

# ── Column generation ────────────────────────────────────────────────────
PRICING_TOL = 1e-7                 # Column enters only with reduced cost < -tol
COLGEN_ROUNDS_PER_ROW = 10         # Round limit = ROUNDS_PER_ROW * m + ROUNDS_BASE
COLGEN_ROUNDS_BASE = 1000
KNAPSACK_DP_MAX_CAPACITY = 100_000  # Above this, pricing uses branch-and-bound
KNAPSACK_NODE_LIMIT = 200_000      # Pricing B&B node cap before falling back to a bound

# ── Offline oracle ───────────────────────────────────────────────────────
COVERAGE_TOL = 1e-7                # Fractional plan coverage slack
OPT_COMPARE_TOL = 1e-6             # Tolerance when comparing OPT_f with integers
MAX_CONFIGURATIONS = 10**6         # Refuse configuration enumeration beyond this
FULL_ENUMERATION_MAX_COLUMNS = 5000  # Above this, OPT_f switches to column generation
CONFIG_PATH_MAX_DEN = 64           # Exact solver uses configuration B&B when DEN <= this
EXACT_MAX_ITEMS = 30               # Assignment B&B refuses larger instances without override
EXACT_NODE_LIMIT = 2_000_000       # Default node budget for solve_exact
EXACT_TIME_LIMIT_MS = 10_000       # Default wall-clock budget for solve_exact

# ── Online policies ──────────────────────────────────────────────────────
LEVEL_MASS_TOL = 1e-9              # Below this the level distribution is degenerate
LP_WARM_START = True               # Reuse the previous basis between level-LP solves
LP_WARM_START_VERIFY = True        # Also cold-solve and keep the cold answer on disagreement
WARM_START_AGREEMENT_TOL = 1e-7

# ── Statistical checks ───────────────────────────────────────────────────
VERDICT_STDERR_BAND = 3.0          # Violation only beyond this many standard errors
DEFAULT_TRIALS = 1000
EXHAUSTIVE_MAX_N = 5               # Largest N enumerated exactly for the sign-permutation queue

# ── Experiment harness ───────────────────────────────────────────────────
DEFAULT_BASE_SEED = 20240101
EXACT_REFERENCE_MAX_B = 12         # Integer grids up to this B default to exact OPT
FRACTIONAL_REFERENCE_MAX_T = 512   # Continuous grids up to this T default to OPT_f
DEFAULT_WORKERS = 1

# ── Bench history store ──────────────────────────────────────────────────
DB_BUSY_TIMEOUT_MS = 30000         # SQLite busy_timeout (ms) before "database is locked"
