"""Spectra of generalized Paley graphs via cyclotomic Gaussian periods."""

from gpspectra.finite_field import Field, build_field, coset_index, find_irreducible

__all__ = ["Field", "build_field", "coset_index", "find_irreducible"]
__version__ = "0.1.0"
