"""
Configuration for reconstruction experiments (Schemes One and Two)
"""

# Wave and sampling parameters
DEFAULT_WAVENUMBER = 8.0
DEFAULT_DIRECTIONS = 128  # desk scale; the reference experiments use 512
DEFAULT_REFERENCE_POINT = (12.0, 12.0)
DEFAULT_STRENGTHS = (-1 + 0j, 1 + 0j, 1j)
DEFAULT_FORWARD_MODEL = "coupled"

# Sampling grid
DEFAULT_REGION = (-6.0, 6.0, -6.0, 6.0)  # x_min, x_max, y_min, y_max
DEFAULT_SPACING = 0.05
DEFAULT_THETA_SET = ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))
DEFAULT_INCIDENCE = (1.0, 0.0)

# Noise
DEFAULT_NOISE_MODEL = "relative"
DEFAULT_NOISE_LEVEL = 0.10
DEFAULT_SEED = 20180712

# Runtime
DEFAULT_WORKERS = 4
LOG_DIR = "logs"
SHOW_PROGRESS = True

# Indicator names accepted by the scenario grammar and the CLI
SCHEME_ONE_INDICATORS = ("iz0", "itheta")
SCHEME_TWO_INDICATORS = ("i2", "i3")

# Named experiment presets, written in the scenario grammar (see SCENARIO_GUIDE.md)
_KITE_SOFT = """
[scatterer]
kind = kite
center = 0, 0
bc = dirichlet
"""

_PEANUT_AND_KITE = """
[scatterer]
kind = peanut
center = 0, 0
bc = dirichlet
[scatterer]
kind = kite
center = 6, 0
bc = neumann
"""

_PEAR_AND_DISK = """
[scatterer]
kind = pear
center = 0, 0
bc = dirichlet
[scatterer]
kind = circle
center = 2, 2
radius = 0.1
bc = dirichlet
"""

_TWO_MINI_DISKS = """
[scatterer]
kind = circle
center = 3, 3
radius = 0.05
bc = dirichlet
[scatterer]
kind = circle
center = 1, 1
radius = 0.15
bc = neumann
"""

EXPERIMENT_PRESETS = {
    "iz0-soft": "scheme = one\nindicator = iz0\nstrengths = 1\n" + _KITE_SOFT,
    "iz0-multiple": "scheme = one\nindicator = iz0\nstrengths = 1\n" + _PEANUT_AND_KITE,
    "iz0-multiscalar": "scheme = one\nindicator = iz0\nstrengths = 1\n" + _PEAR_AND_DISK,
    "itheta-small": "scheme = one\nindicator = itheta\nstrengths = 1\n" + _TWO_MINI_DISKS,
    "phase-retrieval": "scheme = two\nindicator = i3\nz0 = 2, 2\nincidence = 1, 0\n" + _KITE_SOFT,
    "i2-soft": "scheme = two\nindicator = i2\n" + _KITE_SOFT,
    "i2-multiple": "scheme = two\nindicator = i2\n" + _PEANUT_AND_KITE,
    "i2-multiscalar": "scheme = two\nindicator = i2\n" + _PEAR_AND_DISK,
    "i3-small": "scheme = two\nindicator = i3\nincidence = 1, 0\n" + _TWO_MINI_DISKS,
}
