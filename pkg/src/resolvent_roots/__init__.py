"""All roots of a univariate polynomial via the differential resolvent of x(s)."""

__version__ = "0.1.0"
