''' equilattice

Exact counting of lattice points and sublattices, local densities,
invariant forms on homogeneous spaces and CM points of Hecke
correspondences

'''
from pkg_resources import get_distribution, DistributionNotFound

from ._errors import *
from .lattice import *
from .counting import *
from .measure import *
from .forms import *
from .cm import *

try:
    __version__ = get_distribution(__name__).version
except DistributionNotFound:
    # package is not installed
    pass
