"""Pauli algebra, numerics, code spaces and symmetry sectors."""
