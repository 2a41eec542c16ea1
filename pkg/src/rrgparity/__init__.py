"""Exact checks of parity-restricted Rogers-Ramanujan-Gordon identities for overpartitions."""

__version__ = "0.1.0"
