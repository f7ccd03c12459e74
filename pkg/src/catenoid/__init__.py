"""Geometry, boundary spectrum and Morse index of free boundary minimal
catenoids in the unit ball, with the closed-form asymptotic predictions they
converge to."""

from catenoid.kernels import Bracket, SolverConfig

__version__ = "1.0.0"

__all__ = ["Bracket", "SolverConfig", "__version__"]
