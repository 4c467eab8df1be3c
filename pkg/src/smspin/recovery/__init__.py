"""Spinor recovery from simulated three-fold measurements."""
from .oracle import *  # noqa: F401,F403
from .pipeline import *  # noqa: F401,F403
from . import oracle as _oracle, pipeline as _pipeline

__all__ = _oracle.__all__ + _pipeline.__all__
