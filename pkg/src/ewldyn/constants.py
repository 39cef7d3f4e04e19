"""Numerical constants shared across the package."""

# Sign of Im z inside <+|rho|->.  Fixed so that the pseudomode inverse map
# z = (rho_pp - rho_mm - rho_pm + rho_mp)/2 composed with radiant_coords is the
# identity; see tests/test_states.py::test_radiant_sign_roundtrip.
SUBRADIANT_SIGN = -1

# Invariant checks on O(1) quantities.
ATOL = 1e-10

# Trace deviation tolerated on reconstructed states before declaring the
# encoded transforms inconsistent.
TRACE_ATOL = 1e-6

# Polynomial coefficient trim threshold, relative to the largest coefficient.
TRIM_RTOL = 1e-14

# Default concurrence threshold for "zero" in event detection.
ZERO_TOL = 1e-6

# Default extrema matching window, in units of 1/gamma0.
EXTREMA_WINDOW = 0.1

# Default strong-coupling regime: Omega = 5 Gamma.
STRONG_COUPLING_RATIO = 5.0
