"""Exact tools for shear-invariant second-order complex ODEs."""

__version__ = "0.1.0"
