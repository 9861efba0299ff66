"""Verification toolkit for timed hyperproperties over finite timed words."""

__version__ = "0.1.0"
