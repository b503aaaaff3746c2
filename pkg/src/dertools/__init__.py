"""Computable models of derivator machinery: finite categories, lattices, F_p complexes."""

__version__ = "0.1.0"
