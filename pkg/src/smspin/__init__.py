"""Verification and reconstruction toolkit for the classical Standard-Model field equations."""

__version__ = "0.1.0"
