"""Numerical hot-kernel dispatch.

Prefers the compiled extension when it was built; falls back to the pure
NumPy implementation otherwise. Set QGALLERY_PURE_PYTHON=1 to force the
fallback (used by the benchmark and CI matrix).
"""

from __future__ import annotations

import os

from . import _kernels_np

if os.environ.get("QGALLERY_PURE_PYTHON") == "1":
    _impl = _kernels_np
    IMPLEMENTATION = "numpy"
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]

        IMPLEMENTATION = "cython"
    except ImportError:
        _impl = _kernels_np
        IMPLEMENTATION = "numpy"

airy_ai = _impl.airy_ai
airy_bi = _impl.airy_bi
airy_ai_scaled = _impl.airy_ai_scaled
airy_bi_scaled = _impl.airy_bi_scaled
superpose_intensity = _impl.superpose_intensity
superpose_fields = _impl.superpose_fields

# Zero-finding is scalar root refinement, not a hot loop; one implementation.
from ._airy_np import airy_ai_zeros  # noqa: E402,F401
