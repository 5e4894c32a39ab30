"""Collatz number census and the congruence-equation construction of Collatz numbers."""

__version__ = "0.1.0"
