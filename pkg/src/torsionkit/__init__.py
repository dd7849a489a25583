"""Computational tools for torsion in finitely presented groups: small
cancellation checks, Dehn's algorithm, the ``P_t^k`` torsion ladder,
modular machines and their groups, truncated embedding presentations, and
Todd-Coxeter coset enumeration."""

from ._kernels import BACKEND
from .presentations import FinitePresentation, symmetrize, tietze_simplify
from .words import Letter, Word, parse_word

__all__ = ["BACKEND", "FinitePresentation", "Letter", "Word", "parse_word", "symmetrize",
           "tietze_simplify"]
__version__ = "0.1.0"
