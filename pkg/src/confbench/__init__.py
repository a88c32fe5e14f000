"""Portal for running confluence checkers on rewrite-system problems."""

__version__ = "0.1.0"
