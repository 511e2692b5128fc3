"""Signature spectrum toolkit for Pauli-error-detecting quantum codes."""
__version__ = "1.0.0"
