import os
import sys

from panelbounds.lib.parallel import set_async


# environment
MONTE_CARLO_ENV = 'PANELBOUNDS_RUN_MONTE_CARLO'

# record format
SCHEMA_VERSION = 1

# heterogeneity grids
GRID_RANGE = (-5.0, 5.0)
GRID_POINTS = 100
RC_INTERCEPT_RANGE = (-5.0, 5.0)
RC_SLOPE_RANGE = (-7.0, 7.0)
RC_GRID_POINTS = 50
FINE_GRID_FACTOR = 10

# linear programs
FEAS_TOL = 1e-9
GAP_TOL = 1e-8
PIVOT_TOL = 1e-10
MAX_ITER = 50000
BLAND_STALL_COUNT = 50
ORACLE_MAX_SIZE = 16

# bound functions
BOUND_TOL = 1e-9
Z_DECIMALS = 12

# identified set
IDSET_SLACK = 1e-6
IDSET_MAX_SLACK = 1e-3
IDSET_SLACK_FACTOR = 10.0
MIN_CELL_COUNT = 5
DISCRETE_CARDINALITY = 64

# estimation
MLE_MAX_ITER = 100
MLE_GRADIENT_TOL = 1e-8

# inference
METHOD1_GRID_SIZE = 5000
METHOD1_GRID_SIZE_2D = 71
METHOD1_MAX_DIM = 2
TRADEOFF_SPLITS = [
    (0.04, 0.01),
    (0.033, 0.017),
    (0.025, 0.025),
    (0.017, 0.033),
    (0.01, 0.04),
]

# oracles and simulations
QUADRATURE_NODES = 60
ORACLE_DRAWS = 1000000
DESK_REPS = 100
FULL_REPS = 1000
DEFAULT_SEED = 20230101
RC_VARIANCE = 1.0 / 2 ** 0.5

# test settings
TESTING = 'test' in sys.argv[0].split('/')[-1] or\
    'nose2' in sys.argv[0].split('/')[-1]

if TESTING:
    set_async(False)

RUN_MONTE_CARLO = bool(os.getenv(MONTE_CARLO_ENV))
