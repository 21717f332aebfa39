"""Interpolation operators, Galerkin coarse operators and two-grid propagators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from ._linalg import as_dense, lu, solve
from .eigsolve import Spectrum
from .errors import NotSPDError, SingularMatrixError

__all__ = [
    "Interpolation",
    "CfSplit",
    "optimal_interpolation",
    "ideal_interpolation",
    "cf_split_every_other",
    "coarse_operator",
    "two_grid_error",
    "two_grid_error_prepost",
    "m_projection",
    "kappa",
    "anorm_of_operator",
    "COARSE_COND_LIMIT",
]

COARSE_COND_LIMIT = 1e14
RANK_TOL = 1e-10


@dataclass(frozen=True)
class Interpolation:
    p: np.ndarray
    kind: str = "custom"

    def __post_init__(self):
        p = np.atleast_2d(np.asarray(self.p, dtype=np.float64))
        if p.ndim != 2 or p.shape[1] < 1 or p.shape[1] > p.shape[0]:
            raise ValueError(f"interpolation must be n x n_c with 1 <= n_c <= n, got {p.shape}")
        if self.kind not in ("optimal", "ideal", "custom"):
            raise ValueError(f"unknown interpolation kind {self.kind!r}")
        s = sla.svdvals(p)
        if s[-1] <= RANK_TOL * s[0]:
            raise SingularMatrixError(f"interpolation is column rank deficient (sigma_min/sigma_max = {s[-1] / s[0]:.2e})")
        object.__setattr__(self, "p", p)

    @property
    def n_c(self) -> int:
        return self.p.shape[1]


@dataclass(frozen=True)
class CfSplit:
    f_indices: tuple
    c_indices: tuple

    def __post_init__(self):
        f, c = tuple(int(i) for i in self.f_indices), tuple(int(i) for i in self.c_indices)
        if set(f) & set(c):
            raise ValueError("F and C sets overlap")
        if sorted(f + c) != list(range(len(f) + len(c))):
            raise ValueError("F and C sets must cover 0..n-1 exactly once")
        if not c:
            raise ValueError("C set is empty")
        object.__setattr__(self, "f_indices", f)
        object.__setattr__(self, "c_indices", c)

    @property
    def n(self) -> int:
        return len(self.f_indices) + len(self.c_indices)


def optimal_interpolation(spec: Spectrum, n_c: int) -> Interpolation:
    """First ``n_c`` columns of the sorted eigenvector matrix."""
    if not 1 <= n_c <= spec.n:
        raise ValueError(f"n_c={n_c} outside 1..{spec.n}")
    if spec.cuts_complex_block(n_c):
        raise ValueError(f"n_c={n_c} splits a complex-conjugate cluster; its span would not be invariant")
    return Interpolation(spec.vectors[:, :n_c].copy(), kind="optimal")


def cf_split_every_other(n: int, stride: int = 2) -> CfSplit:
    """C-points at ``stride-1, 2*stride-1, ...``; the rest are F-points.

    >>> cf_split_every_other(6, 3).c_indices
    (2, 5)
    """
    if n < 2 or stride < 2:
        raise ValueError("need n >= 2 and stride >= 2")
    c = tuple(range(stride - 1, n, stride))
    f = tuple(i for i in range(n) if (i + 1) % stride)
    if not c or not f:
        raise ValueError(f"split of n={n} with stride={stride} leaves an empty set")
    return CfSplit(f_indices=f, c_indices=c)


def ideal_interpolation(a, split: CfSplit) -> Interpolation:
    """``W = -A_ff^{-1} A_fc`` on F-rows, identity on C-rows (original order)."""
    a = as_dense(a)
    f, c = list(split.f_indices), list(split.c_indices)
    if a.shape != (split.n, split.n):
        raise ValueError("split does not match matrix size")
    p = np.zeros((split.n, len(c)))
    if f:
        p[f, :] = -solve(a[np.ix_(f, f)], a[np.ix_(f, c)], "A_ff")
    p[c, np.arange(len(c))] = 1.0
    return Interpolation(p, kind="ideal")


def _p(p) -> np.ndarray:
    return p.p if isinstance(p, Interpolation) else np.asarray(p, dtype=np.float64)


def coarse_operator(A_op, p) -> np.ndarray:
    """Galerkin product ``P^T A P``; refuses numerically singular results."""
    pm = _p(p)
    ac = pm.T @ (as_dense(A_op) @ pm)
    cond = np.linalg.cond(ac)
    if not np.isfinite(cond) or cond > COARSE_COND_LIMIT:
        raise SingularMatrixError(
            f"coarse operator P^T A P ({ac.shape[0]}x{ac.shape[0]}) is numerically singular (cond {cond:.3e})"
        )
    return ac


def _cgc(a, pm):
    # I - P (P^T A P)^{-1} P^T A
    ac = coarse_operator(a, pm)
    return np.eye(a.shape[0]) - pm @ solve(ac, pm.T @ a, "coarse operator")


def two_grid_error(A_op, m_sym, p) -> np.ndarray:
    """``(I - P A_c^{-1} P^T A)(I - S^{-1} A)`` for the smoother ``S = m_sym``.

    With the symmetrized smoother this is the propagator whose spectrum the
    optimal-interpolation identity describes. Passing the unsymmetrized
    Kaczmarz ``M`` gives the form whose squared ``A``-norm equals
    ``1 - lambda_{n_c+1}`` in the SPD case.
    """
    a = as_dense(A_op)
    pm = _p(p)
    smooth = np.eye(a.shape[0]) - solve(m_sym, a, "smoother")
    return _cgc(a, pm) @ smooth


def two_grid_error_prepost(A_op, m, p, r=None) -> np.ndarray:
    """``(I - M^{-T} A)(I - P (R A P)^{-1} R A)(I - M^{-1} A)``; ``R = P^T`` by default."""
    a = as_dense(A_op)
    m = as_dense(m)
    pm = _p(p)
    rm = pm.T if r is None else as_dense(r)
    n = a.shape[0]
    rap = rm @ a @ pm
    cgc = np.eye(n) - pm @ solve(rap, rm @ a, "RAP")
    fac = lu(m, "smoother")
    pre = np.eye(n) - sla.lu_solve(fac, a)
    post = np.eye(n) - sla.lu_solve(fac, a, trans=1)
    return post @ cgc @ pre


def m_projection(p, m_sym) -> np.ndarray:
    """``P (P^T M P)^{-1} P^T M``: the ``M``-orthogonal projector onto range(P)."""
    pm = _p(p)
    m = as_dense(m_sym)
    return pm @ solve(pm.T @ m @ pm, pm.T @ m, "P^T M P")


def _chol(a, what):
    try:
        return sla.cholesky(as_dense(a), lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotSPDError(f"{what} is not symmetric positive definite") from exc


def kappa(p, v, a, m_sym) -> float:
    """``||(I - Pi) v||_M^2 / ||v||_A^2`` with ``Pi`` the ``M``-projector."""
    v = np.asarray(v, dtype=np.float64)
    if not np.any(v):
        raise ValueError("v must be nonzero")
    a, m = as_dense(a), as_dense(m_sym)
    _chol(a, "A")
    _chol(m, "M")
    e = v - m_projection(p, m) @ v
    return float((e @ m @ e) / (v @ a @ v))


def anorm_of_operator(e, a) -> float:
    """``||E||_A = ||A^{1/2} E A^{-1/2}||_2`` for SPD ``A``."""
    a = as_dense(a)
    w, q = np.linalg.eigh(0.5 * (a + a.T))
    if w[0] <= 0:
        raise NotSPDError(f"A is not SPD (smallest eigenvalue {w[0]:.3e})")
    half = (q * np.sqrt(w)) @ q.T
    ihalf = (q / np.sqrt(w)) @ q.T
    return float(np.linalg.norm(half @ as_dense(e) @ ihalf, 2))
