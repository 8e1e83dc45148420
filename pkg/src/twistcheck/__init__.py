"""Homology-level verification of twist-subgroup generation claims for
closed nonorientable surfaces."""

__version__ = "0.1.0"
