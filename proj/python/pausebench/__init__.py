"""Speech/pause timing features and concurrent-validity analysis."""

from ._core import *  # noqa: F401,F403
from ._core import PausebenchError, __version__  # noqa: F401
