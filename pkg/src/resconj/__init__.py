"""Radical-membership experiments for structured characteristic polynomials."""

__version__ = "0.1.0"
