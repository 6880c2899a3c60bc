"""Tabular-to-image encoders with a 1-NN probe and comparison statistics."""

from ._core import *  # noqa: F401,F403
from ._core import MdeError, __doc__  # noqa: F401

__version__ = "0.1.0"
