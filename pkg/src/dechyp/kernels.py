"""Select the compiled per-triangle kernels when available.

Set ``DECHYP_PURE_PYTHON=1`` to force the pure-Python fallback.
"""

import os

if os.environ.get("DECHYP_PURE_PYTHON"):
    from ._kernels_py import gram_inverse, gram_unit, tilt_matrix, tilts

    BACKEND = "python"
else:
    try:
        from ._kernels import gram_inverse, gram_unit, tilt_matrix, tilts

        BACKEND = "cython"
    except ImportError:
        from ._kernels_py import gram_inverse, gram_unit, tilt_matrix, tilts

        BACKEND = "python"

__all__ = ["BACKEND", "gram_inverse", "gram_unit", "tilt_matrix", "tilts"]
