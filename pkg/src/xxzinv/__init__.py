"""Invariant-sector density matrices and entanglement entropy for the critical XXZ chain."""

__version__ = "0.1.0"
