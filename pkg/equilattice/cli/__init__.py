''' cli

Experiment configurations, the runner and its reports, and the
`equilattice` console command

'''

from .config import *
from .report import *
from .runner import *
from .main import *

__all__ = [s for s in dir() if not s.startswith('_')]
