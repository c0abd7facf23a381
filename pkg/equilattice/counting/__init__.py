''' counting

Sublattice index multiplicities and local densities of representations

'''

from .multiplicity import *
from .local_density import *

__all__ = [s for s in dir() if not s.startswith('_')]
