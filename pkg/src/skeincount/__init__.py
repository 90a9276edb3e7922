"""Framed HOMFLYPT skein computations and skein-valued curve counts."""

__version__ = "0.1.0"
