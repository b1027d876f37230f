# Default numerical settings shared by the analysis modules.

#: Version of the JSON report layout written by ``reports``
SCHEMA_VERSION = "1.0"

#: Orbits whose norm exceeds this value are declared unbounded
BLOWUP_RADIUS = 1e8

#: Integrator defaults (Dormand-Prince 5(4) pair)
RTOL = 1e-10
ATOL = 1e-12
H_INIT = 1e-3
H_MAX = 0.1
MAX_STEPS = 1000000
T_MAX = 1e4

#: Event location accuracy (in time)
EVENT_XTOL = 1e-12

#: Hypothesis certification
MAX_DEPTH = 12
TRACE_TOL = 1e-12
FAILED_AREA_FRACTION = 0.01

#: Closure of the negative-trace set
R_MIN = 2.0 ** -10
DELTA = 1e-12

#: Critical points
NEWTON_TOL = 1e-10
DEDUP_TOL = 1e-8

#: Injectivity falsification
COLLISION_TOL = 1e-9
SEPARATION_TOL = 1e-6

#: Return maps
TOL_FIXED = 1e-7
BRACKET_WIDTH = 1e-3
TUBE_WIDTH = 1e-5
TUBE_TRACE_TOL = 0.0

#: Empirical attraction sampling
GAS_BALL = 0.1
SAMPLING_RTOL = 1e-8
SAMPLING_ATOL = 1e-10
SAMPLING_H_MAX = 1.0
SAMPLING_TIME = 50.0

#: Hamiltonian reconstruction
QUAD_TOL = 1e-10

#: Roundoffs padded around closed-form enclosures (see intervals.widen)
ULPS = 8
