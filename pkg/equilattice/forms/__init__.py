''' forms

Lie configurations, alternating forms on their quotients, the pull-push
form by fibre integration, curvature and Chern forms

'''

from .exterior import *
from .lie_configuration import *
from .compact_fibre import *
from .pull_push import *
from .curvature import *
from .presets import *

__all__ = [s for s in dir() if not s.startswith('_')]
