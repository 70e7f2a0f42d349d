"""Numerics for Hankel transforms, transplantation operators between
Bessel orders, Muckenhoupt weights, and the sweep harness that measures
the uniformity claims the library is organized around."""

__version__ = "0.1.0"
