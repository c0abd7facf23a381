''' utils

Shared input checks, exact integer helpers and random state handling

'''

from .checks_and_conversions import *
from .exact import *
from .parallel import *
from .random_state import *

__all__ = [s for s in dir() if not s.startswith('_')]
