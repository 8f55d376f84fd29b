"""Stackelberg opinion-optimization game: equilibria, FTPL learner, adversary, oracles."""

from ._core import *  # noqa: F401,F403
from ._core import StackopError, __version__  # noqa: F401
