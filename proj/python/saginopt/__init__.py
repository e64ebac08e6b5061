"""Space-air-ground content delivery: link models, PER bounds and the
association/bandwidth solvers, backed by the C++ core."""

from saginopt._core import *  # noqa: F401,F403
from saginopt import _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
