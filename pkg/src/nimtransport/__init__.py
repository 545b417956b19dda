"""Exact XOR optimal transport and multistochastic Kantorovich tools."""

__version__ = "0.1.0"
