"""Kaczmarz relaxation in matrix form and its symmetrizations.

Kaczmarz is Gauss-Seidel on ``A A^T y = b`` with ``x = A^T y``. Writing
``A A^T = D + L + U`` and ``N = D + L`` the ``x``-iteration is
``x <- x + M^{-1}(b - A x)`` with ``M = N A^{-T}``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from ._linalg import as_dense, lu, solve, sym
from .errors import SingularMatrixError

__all__ = [
    "Smoother",
    "ConvergenceReport",
    "kaczmarz_matrix",
    "kaczmarz_smoother",
    "symmetrize",
    "precond_form",
    "check_convergent",
    "kaczmarz_sweep",
    "smoother_propagator",
]


@dataclass(frozen=True)
class Smoother:
    """Dense smoother matrices for one operator.

    Attributes
    ----------
    m : ndarray
        Kaczmarz smoother ``M = N A^{-T}``.
    n_mat : ndarray
        Lower triangle (with diagonal) of ``A A^T``.
    m_sym : ndarray or None
        ``M^T (M^T + M - A)^{-1} M``; the one used by every analysis path.
    m_bar : ndarray or None
        ``M (M^T + M - A)^{-1} M^T``.
    """

    m: np.ndarray
    n_mat: np.ndarray
    m_sym: np.ndarray | None = None
    m_bar: np.ndarray | None = None


@dataclass(frozen=True)
class ConvergenceReport:
    min_eig: float
    ok: bool


def kaczmarz_matrix(a) -> Smoother:
    """Kaczmarz smoother ``M = N A^{-T}`` with ``N = tril(A A^T)``.

    ``M`` is obtained from ``A M^T = N^T`` with one LU factorization of
    ``A``, never via an explicit inverse.

    >>> kaczmarz_matrix(np.diag([2.0, 3.0])).m
    array([[2., 0.],
           [0., 3.]])
    """
    a = as_dense(a)
    fac = lu(a, "A (Kaczmarz)")
    n_mat = np.tril(a @ a.T)
    m = sla.lu_solve(fac, n_mat.T).T
    return Smoother(m=m, n_mat=n_mat)


def _middle(m, a):
    m, a = as_dense(m), as_dense(a)
    return m, m.T + m - a, np.array_equal(a, a.T)


def symmetrize(m, a) -> np.ndarray:
    """``M^T (M^T + M - A)^{-1} M``.

    For symmetric ``A`` the result is symmetric and roundoff skew is removed.
    For nonsymmetric ``A`` it is returned as computed, so that
    ``I - result^{-1} A = (I - M^{-1} A)(I - M^{-T} A)`` still holds.
    """
    m, mid, a_sym = _middle(m, a)
    out = m.T @ solve(mid, m, "M^T + M - A")
    return sym(out) if a_sym else out


def precond_form(m, a) -> np.ndarray:
    """``M (M^T + M - A)^{-1} M^T``; symmetrized like :func:`symmetrize`."""
    m, mid, a_sym = _middle(m, a)
    out = m @ solve(mid, m.T, "M^T + M - A")
    return sym(out) if a_sym else out


def kaczmarz_smoother(a) -> Smoother:
    """Kaczmarz smoother with both symmetrized forms filled in."""
    s = kaczmarz_matrix(a)
    return replace(s, m_sym=symmetrize(s.m, a), m_bar=precond_form(s.m, a))


def check_convergent(m, a) -> ConvergenceReport:
    """Smallest eigenvalue of the symmetric part of ``M + M^T - A``."""
    m = as_dense(m)
    s = sym(m + m.T - as_dense(a))
    w = np.linalg.eigvalsh(s)
    lo = float(w[0])
    return ConvergenceReport(min_eig=lo, ok=lo > 0)


def smoother_propagator(m, a) -> np.ndarray:
    """``I - M^{-1} A``."""
    a = as_dense(a)
    return np.eye(a.shape[0]) - solve(m, a, "smoother")


def kaczmarz_sweep(a, x, b) -> np.ndarray:
    """One forward Kaczmarz sweep by row projections (returns a new vector).

    Row ``i`` moves ``x`` onto the hyperplane ``a_i . x = b_i``. Independent
    of :func:`kaczmarz_matrix`; the two agree to rounding.
    """
    a = sp.csr_matrix(a) if sp.issparse(a) else sp.csr_matrix(np.asarray(a, dtype=float))
    x = np.array(x, dtype=np.float64, copy=True)
    b = np.asarray(b, dtype=np.float64)
    for i in range(a.shape[0]):
        lo, hi = a.indptr[i], a.indptr[i + 1]
        cols, vals = a.indices[lo:hi], a.data[lo:hi]
        nrm2 = vals @ vals
        if nrm2 == 0.0:
            raise SingularMatrixError(f"row {i} of A is zero")
        x[cols] += (b[i] - vals @ x[cols]) / nrm2 * vals
    return x
