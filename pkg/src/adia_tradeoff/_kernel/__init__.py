"""Propagation kernel backends.

The compiled extension is preferred for the two-level stepping loop
when it imported cleanly; the vectorized numpy implementation is the
fallback and the reference.  Set ADIA_PURE=1 to force the fallback.
"""
from __future__ import annotations

import os

from . import pure

try:  # pragma: no cover - depends on whether the extension was built
    from . import _native
except ImportError:  # pragma: no cover
    _native = None

def active_backend() -> str:
    force_pure = os.environ.get("ADIA_PURE", "") not in ("", "0")
    return "pure" if (_native is None or force_pure) else "native"


def su2_interp_propagate(h_i, h_f, f_sub1, f_sub2, theta, psi0, marks):
    if active_backend() == "native":
        import numpy as np

        return _native.su2_interp_propagate(
            np.ascontiguousarray(h_i, dtype=complex),
            np.ascontiguousarray(h_f, dtype=complex),
            np.ascontiguousarray(f_sub1, dtype=float),
            np.ascontiguousarray(f_sub2, dtype=float),
            float(theta),
            np.ascontiguousarray(psi0, dtype=complex),
            np.ascontiguousarray(marks, dtype=np.int_),
        )
    return pure.su2_interp_propagate(h_i, h_f, f_sub1, f_sub2, theta, psi0, marks)


dense_interp_propagate = pure.dense_interp_propagate
effective_f = pure.effective_f
GAUSS_C1 = pure.GAUSS_C1
GAUSS_C2 = pure.GAUSS_C2
