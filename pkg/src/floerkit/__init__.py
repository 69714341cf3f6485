"""Conley indices of sampled flows and equivariant Floer-module invariants."""

__version__ = "0.1.0"
