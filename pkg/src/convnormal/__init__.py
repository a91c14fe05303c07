"""Exact checks of integral closedness, convex normality and parallelepiped
covers for rational and lattice polytopes."""

__version__ = "0.1.0"
