''' lattice

Quadratic lattices, Hermite normal forms and enumeration of vectors,
tuples and sublattices

'''

from .quadratic_lattice import *
from .hnf import *
from .enumeration import *

__all__ = [s for s in dir() if not s.startswith('_')]
