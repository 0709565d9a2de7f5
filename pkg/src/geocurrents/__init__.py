"""Geodesic currents, intersection numbers and degenerations of triangle-group representations."""

__version__ = "0.1.0"
