"""Exact computational kernel for line geometry of real projective 3-space.

Lines of P^3 are handled through their Plücker coordinates on the Klein
quadric, and the quadric's ambient (3,3) quadratic space is wrapped in its
Clifford algebra so that collineations and correlations of P^3 become
sandwich actions of versors.  All arithmetic is exact (rationals, with a
quadratic extension where a normalization demands a square root).
"""

from .errors import KleinError
from .ga_core import Multivector, e

__all__ = ["KleinError", "Multivector", "e"]
__version__ = "0.1.0"
