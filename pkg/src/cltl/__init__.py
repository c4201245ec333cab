"""Constrained LTL learning from lasso traces via MaxSAT."""

__version__ = "0.1.0"
