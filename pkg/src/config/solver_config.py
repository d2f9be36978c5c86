"""
Configuration for the forward solver and the special-function layer
"""

# Bessel / Hankel evaluation
MAX_BESSEL_ORDER = 200
MAX_BESSEL_ARGUMENT = 5000.0
SERIES_ARGUMENT_LIMIT = 1.0  # power series below this argument
ASYMPTOTIC_ARGUMENT_LIMIT = 25.0  # Hankel expansion for orders 0/1 from here on
ASYMPTOTIC_TERMS = 30
MILLER_EXTRA_ORDERS = 20
MILLER_RESCALE_THRESHOLD = 1e250
EULER_GAMMA = 0.57721566490153286061

# Boundary curves
POLYGON_SEGMENTS = 2048  # interior tests and disjointness checks
MIN_QUADRATURE_NODES = 4
MIN_SOLVER_NODES = 16

# Nystrom discretization
DEFAULT_NODES = 256  # per curve, converged to ~8 digits at k=8
COUPLING_ETA_PER_WAVENUMBER = 1.0  # eta = k
MAX_CONDITION_NUMBER = 1e12
RESIDUAL_TOLERANCE = 1e-10
SOLVER_CACHE_SIZE = 8

# Point scatterer coupling
COUPLING_DENOMINATOR_FLOOR = 1e-8

# Mie oracle
MIE_EXTRA_ORDERS = 40

# Trilateration
COLLINEARITY_TOLERANCE = 1e-9
