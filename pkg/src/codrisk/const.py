"""Constants for the codrisk package."""

# Quadrature
DMEASURE_TOL: float = 1e-8
COD_TOL: float = 1e-7
CROSS_CHECK_TOL: float = 1e-6
MASS_TOL: float = 1e-10
QUAD_LIMIT: int = 200
QUAD_EPSREL: float = 1e-10

# Root finding
ROOT_XTOL: float = 1e-300
ROOT_RTOL: float = 1e-13
SAMPLER_XTOL: float = 1e-9
BRACKET_SLACK: float = 1e-9
# Roots in the units of the risk, e.g. conditional upper quantiles
VALUE_XTOL: float = 1e-12
BRACKET_EXPANSIONS: int = 60

# Smallest probability / complement handed to a quantile function.
TINY_PROB: float = 1e-300

# Grids
DEPENDENCE_GRID: int = 201
ORDER_GRID: int = 2000
DOMINANCE_GRID: int = 1000
PSI_GRID: int = 201
EFFECTIVE_SUPPORT_EPS: float = 1e-6

# Verdict tolerances
CONCORDANCE_TOL: float = 1e-12
PQD_TOL: float = 1e-12
TP2_TOL: float = 1e-12
RTI_TOL: float = 1e-10
SI_TOL: float = 1e-9
ORDER_TOL: float = 1e-9
PSI_TOL: float = 1e-9

# Monte Carlo
MC_MIN_SAMPLES: int = 10_000
MC_MIN_ACCEPTED: int = 100
MC_MIN_BATCHES: int = 10
MC_MAX_THRESHOLD: float = 0.999
MC_DEFAULT_SAMPLES: int = 200_000
MC_DEFAULT_BATCHES: int = 20
MC_DEFAULT_SEED: int = 42

# Figures
FIGURE_POINTS: int = 80
FIGURE_CHECK_TOL: float = 1e-6

# Environment overrides for CLI defaults
ENV_TOL: str = "CODRISK_TOL"
ENV_GRID: str = "CODRISK_GRID"
ENV_SEED: str = "CODRISK_SEED"
ENV_WORKERS: str = "CODRISK_WORKERS"
