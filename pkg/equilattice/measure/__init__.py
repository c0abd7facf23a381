''' measure

Empirical measures on the unit discriminant surface and the Grassmannian,
windows, limit measure oracles and convergence tables

'''

from .projection import *
from .window import *
from .empirical import *
from .oracle import *
from .convergence import *

__all__ = [s for s in dir() if not s.startswith('_')]
