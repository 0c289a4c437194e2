"""gesture_tuples.utils"""

from .arguments import *
from .log import *
from .namespace import *
from .timer import *
