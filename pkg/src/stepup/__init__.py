"""Stepping-up 4-graph constructions from pair colorings, brute-force
verification of their freeness and independence properties at desk scale,
witness-hunting walks, and certified Ramsey / Erdős–Rogers bounds."""

__version__ = "0.1.0"

from .backend import active_backend, set_workers  # noqa: F401
