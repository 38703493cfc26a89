"""Numerical and exact toolkit for the integrable-systems description of
Lawson's genus-2 minimal surface."""

from .errors import LawsonError
from .integrator import ToleranceBudget
from .linalg import Mat2
from .potential import PotentialParams, close_params

__all__ = ["LawsonError", "Mat2", "PotentialParams", "ToleranceBudget", "close_params"]
__version__ = "0.1.0"
