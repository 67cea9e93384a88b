"""Concentration-of-measure harness for Stiefel and Grassmann manifolds."""

__version__ = '1.0.0'
