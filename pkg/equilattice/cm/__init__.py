''' cm

Hecke correspondences on the modular curve, binary quadratic forms,
the fundamental domain of SL(2,Z) and the equidistribution of regular
fixed points

'''

from .fundamental_domain import *
from .binary_forms import *
from .hecke import *
from .cm_points import *

__all__ = [s for s in dir() if not s.startswith('_')]
