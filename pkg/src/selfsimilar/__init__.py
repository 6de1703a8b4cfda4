"""Exact partial-injection models of self-similar structures, plus a typed grammar engine."""

__version__ = "0.1.0"
