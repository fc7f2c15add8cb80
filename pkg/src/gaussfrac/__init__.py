"""Exact complex continued fractions over the Gaussian integers."""
from .gaussint import GaussianInt, GaussianRational, gnorm, gq_reduce

__all__ = ["GaussianInt", "GaussianRational", "gnorm", "gq_reduce"]
__version__ = "0.1.0"
