"""Multiple-testing laboratory: mixture models, step-up procedures,
criticality diagnostics, and null-proportion estimation."""

from ._fdrlab import *  # noqa: F401,F403
from ._fdrlab import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
