"""Exact computations for point-primitive generalised quadrangles."""

__version__ = "0.1.0"
