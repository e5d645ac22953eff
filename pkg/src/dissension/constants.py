"""Numerical tolerances shared across the package."""

HERMITICITY_TOL = 1e-10
EIGEN_TOL = 1e-12
PROB_TOL = 1e-12

TRACE_TOL = 1e-10
PSD_TOL = 1e-10
NORM_TOL = 1e-9

MAX_JACOBI_SWEEPS = 100
