"""Avoiding-stick coproduct on based loop spaces of spherical space forms."""

__version__ = "0.1.0"
