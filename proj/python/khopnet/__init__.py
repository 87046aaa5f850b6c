"""Python bindings for the khopnet k-hop clustering simulator."""

from ._khopnet import *  # noqa: F401,F403
from ._khopnet import __doc__  # noqa: F401

__version__ = "0.1.0"
