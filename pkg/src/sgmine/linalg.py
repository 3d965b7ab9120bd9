"""Dense Gaussian elimination for the small systems used in frequency annotation."""

from __future__ import annotations

import numpy as np


class SingularMatrixError(ArithmeticError):
    pass


def solve(a, b, tol: float = 1e-12) -> np.ndarray:
    """Solve ``a @ x = b`` by elimination with partial pivoting.

    ``a`` must be square.  A pivot smaller than ``tol`` times the largest
    absolute entry of ``a`` is treated as singular.
    """
    a = np.array(a, dtype=float)
    x = np.array(b, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or x.shape != (n,):
        raise ValueError(f"shape mismatch: a {a.shape}, b {x.shape}")
    scale = np.abs(a).max() if a.size else 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= tol * scale:
            raise SingularMatrixError(f"matrix is singular at column {k}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            x[[k, p]] = x[[p, k]]
        factors = a[k + 1 :, k] / a[k, k]
        a[k + 1 :, k:] -= np.outer(factors, a[k, k:])
        x[k + 1 :] -= factors * x[k]
    for k in range(n - 1, -1, -1):
        x[k] = (x[k] - a[k, k + 1 :] @ x[k + 1 :]) / a[k, k]
    return x
