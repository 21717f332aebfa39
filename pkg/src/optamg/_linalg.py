"""Small dense helpers used by several modules."""

from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .errors import SingularMatrixError

# pivot ratio below which an LU factorization is treated as singular
PIVOT_FLOOR = 1e-14


def as_dense(a) -> np.ndarray:
    if sp.issparse(a):
        return a.toarray()
    return np.asarray(a, dtype=np.float64)


def lu(a, what: str = "matrix"):
    """LU-factor ``a``; raise :class:`SingularMatrixError` on tiny pivots."""
    a = as_dense(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{what} must be square, got {a.shape}")
    if a.size == 0:
        raise SingularMatrixError(f"{what} is empty")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        fac = sla.lu_factor(a, check_finite=True)
    piv = np.abs(np.diag(fac[0]))
    if not np.all(np.isfinite(piv)) or piv.min() <= PIVOT_FLOOR * max(piv.max(), np.finfo(float).tiny):
        raise SingularMatrixError(f"{what} is numerically singular (pivot ratio {piv.min() / max(piv.max(), 1e-300):.3e})")
    return fac


def solve(a, b, what: str = "matrix", trans: int = 0) -> np.ndarray:
    return sla.lu_solve(lu(a, what), b, trans=trans)


def sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def rel_fro(x, ref) -> float:
    """``||x - ref||_F / ||ref||_F`` (absolute when ``ref`` is zero)."""
    x, ref = as_dense(x), as_dense(ref)
    den = np.linalg.norm(ref)
    num = np.linalg.norm(x - ref)
    return float(num / den) if den > 0 else float(num)
