"""Vacuum-fluctuation self-propulsion forces, friction and cooling of heterogeneous bodies."""

__version__ = "0.1.0"
