"""Cohomology and representation checks for small Hopf superalgebras over finite fields."""

__version__ = "0.1.0"
