"""Riesz-measure approximation by zero sets.

The compiled module sits next to this package in an installed wheel; in a
plain CMake build tree it lives at the build root, hence the fallback.
"""

try:
    from ._core import *  # noqa: F401,F403
    from . import _core as _impl
except ImportError:
    from _core import *  # noqa: F401,F403
    import _core as _impl

__all__ = [name for name in dir(_impl) if not name.startswith("_")]
__version__ = "0.1.0"
