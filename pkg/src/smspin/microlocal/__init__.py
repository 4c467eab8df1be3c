"""Interaction geometry, transport along light rays and hatted interaction symbols."""
from .geometry import *  # noqa: F401,F403
from .symbols import *  # noqa: F401,F403
from .transport import *  # noqa: F401,F403
from .certificate import *  # noqa: F401,F403
from . import certificate, geometry, symbols, transport

__all__ = geometry.__all__ + symbols.__all__ + transport.__all__ + certificate.__all__
