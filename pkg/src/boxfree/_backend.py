"""Pick the compiled kernels when available.

Set ``BOXFREE_PURE=1`` to force the pure-Python implementation.
"""
import os

from . import _pykernels

py = _pykernels
compiled = None
if os.environ.get("BOXFREE_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled  # type: ignore[no-redef]
    except ImportError:
        compiled = None

kernels = compiled if compiled is not None else py
BACKEND = kernels.BACKEND
MAX_COMPILED_N = getattr(compiled, "MAX_ROW_SEARCH_N", 0)


def row_module(n: int):
    """Kernel module able to run the row search at size n."""
    return kernels if n <= MAX_COMPILED_N or kernels is py else py
