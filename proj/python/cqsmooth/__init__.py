from ._cqsmooth import *  # noqa: F401,F403
from ._cqsmooth import __version__  # noqa: F401
