"""Exact verification engine for coexact BV-infinity algebras."""

__version__ = "0.1.0"
