"""Exact verifier for the sharp L^2 -> L^2d extension inequality on the finite-field moment curve."""

__version__ = "0.1.0"
