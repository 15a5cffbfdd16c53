"""Shapes of unit lattices of dihedral D_p number fields with one real embedding."""

__version__ = "0.1.0"
