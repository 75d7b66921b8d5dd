"""Select the compiled kernels when available, else the NumPy fallback.

Set ``PLSPRESS_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _fallback

if os.environ.get("PLSPRESS_PURE_PYTHON"):
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

kernels = _compiled if _compiled is not None else _fallback
BACKEND = "cython" if _compiled is not None else "python"
fallback = _fallback
compiled = _compiled
