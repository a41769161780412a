"""Commitments to rational curves hidden on smooth surfaces in P^3 over F_q."""

__version__ = "0.1.0"
