"""Accident-severity modeling pipeline bound from the C++ core."""

from accsev._core import *  # noqa: F401,F403
from accsev._core import __version__  # noqa: F401
