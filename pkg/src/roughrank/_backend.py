"""Select the kernel implementation at import time.

The compiled extension is used when it was built; set ``ROUGHRANK_PURE=1``
to force the pure-Python fallback.
"""
import os

from . import _kernels_py

if os.environ.get("ROUGHRANK_PURE") == "1":
    _compiled = None
else:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
kernels = _compiled if _compiled is not None else _kernels_py


def hinge_sgd(X, y, epochs, eta0, lam):
    import numpy as np

    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValueError("X must be (n, d) and y must be (n,)")
    return kernels.hinge_sgd(X, y, int(epochs), float(eta0), float(lam))
