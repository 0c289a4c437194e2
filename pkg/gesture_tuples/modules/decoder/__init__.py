"""gesture_tuples.decoder"""

from .path import *
from .viterbi import *
from .oracle import *
