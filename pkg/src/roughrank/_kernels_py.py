"""Pure-Python twin of the compiled kernels in ``_kernels.pyx``."""
import math

import numpy as np


def hinge_sgd(X, y, epochs, eta0, lam):
    """Stochastic subgradient descent on the L2-regularised hinge loss.

    One update per sample in row order; the step size decays as
    ``eta0 / sqrt(t)`` with ``t`` the global update count. The bias is
    not regularised. Returns ``(w, b)``.
    """
    rows = np.asarray(X, dtype=np.float64).tolist()
    labels = np.asarray(y, dtype=np.float64).tolist()
    d = len(rows[0]) if rows else 0
    w = [0.0] * d
    b = 0.0
    t = 0
    for _ in range(epochs):
        for xi, yi in zip(rows, labels):
            t += 1
            eta = eta0 / math.sqrt(float(t))
            score = b
            for k in range(d):
                score = score + w[k] * xi[k]
            if yi * score < 1.0:
                for k in range(d):
                    w[k] = w[k] - eta * (lam * w[k] - yi * xi[k])
                b = b + eta * yi
            else:
                for k in range(d):
                    w[k] = w[k] - eta * (lam * w[k])
    return np.array(w, dtype=np.float64), b
