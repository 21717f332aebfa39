"""Generalized eigenproblem ``A x = lambda M x`` for symmetric, possibly
indefinite ``A`` and ``M``.

The pencil is reduced to the standard problem ``M^{-1} A`` and solved with a
dense nonsymmetric QR eigensolver (LAPACK ``geev``). Eigenvectors are then
normalized in the indefinite bilinear form ``<x, y>_M = x^T M y``.

Normalization works cluster by cluster rather than vector by vector. For the
block operator ``[[0, A], [A^T, 0]]`` with a Kaczmarz smoother both matrices
are block off-diagonal, ``M^{-1} A`` is block diagonal, and every eigenvalue
appears twice with one eigenvector per block; each of those has ``x^T M x = 0``
exactly. Within a cluster of (numerically) equal eigenvalues the eigenvectors
are therefore re-combined through the eigendecomposition of their ``M``-Gram
matrix, which yields ``V^T M V = diag(norm_signs)`` with signs ``+-1``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
import logging

import numpy as np
import scipy.linalg as sla

from ._linalg import as_dense, lu, sym
from .errors import ComplexSpectrumError, DefectiveSpectrumError, NeutralVectorError

__all__ = [
    "Spectrum",
    "generalized_eig",
    "orthonormality_residual",
    "eig_residual",
    "write_spectrum_csv",
]

log = logging.getLogger(__name__)

IMAG_TOL = 1e-8
CLUSTER_TOL = 1e-8
DEGENERACY_FLOOR = 1e-10
# smallest singular value ratio accepted for a cluster's eigenvector basis
SPAN_TOL = 1e-8


@dataclass(frozen=True)
class Spectrum:
    """Sorted eigenpairs of a pencil.

    Attributes
    ----------
    values : ndarray, shape (n,)
        Real parts of the eigenvalues, ascending.
    vectors : ndarray, shape (n, n)
        ``V`` with ``A V = M V lam`` and ``V^T M V = diag(norm_signs)``.
    norm_signs : ndarray, shape (n,)
        ``+1.0`` or ``-1.0``.
    max_imag : float
        Largest imaginary part discarded when realifying eigenvalues.
    imag : ndarray, shape (n,)
        Imaginary parts that were kept (all zero unless complex pairs were
        requested and found).
    lam : ndarray, shape (n, n)
        ``diag(values)`` except on complex clusters, which hold the real
        block representing the cluster's action.
    complex_blocks : tuple of (start, stop)
        Column ranges of complex clusters; a coarse space must not cut one.
    """

    values: np.ndarray
    vectors: np.ndarray
    norm_signs: np.ndarray
    max_imag: float = 0.0
    imag: np.ndarray | None = None
    lam: np.ndarray | None = None
    complex_blocks: tuple = field(default_factory=tuple)

    def __post_init__(self):
        n = len(self.values)
        if self.imag is None:
            object.__setattr__(self, "imag", np.zeros(n))
        if self.lam is None:
            object.__setattr__(self, "lam", np.diag(self.values))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues as complex numbers, in storage order."""
        return self.values + 1j * self.imag

    def cuts_complex_block(self, n_c: int) -> bool:
        return any(lo < n_c < hi for lo, hi in self.complex_blocks)


def _clusters(lam: np.ndarray, tol: float):
    """Group indices of ``lam`` (already sorted by real part)."""
    n = len(lam)
    taken = np.zeros(n, dtype=bool)
    groups = []
    for i in range(n):
        if taken[i]:
            continue
        members = [i]
        taken[i] = True
        j = i + 1
        while j < n and lam[j].real - lam[i].real <= tol:
            if not taken[j] and abs(abs(lam[j].imag) - abs(lam[i].imag)) <= tol:
                members.append(j)
                taken[j] = True
            j += 1
        groups.append(members)
    return groups


def generalized_eig(
    A_op,
    m_sym,
    imag_tol: float = IMAG_TOL,
    *,
    keep_complex: bool = False,
    cluster_tol: float = CLUSTER_TOL,
    degeneracy_floor: float = DEGENERACY_FLOOR,
) -> Spectrum:
    """Solve ``A x = lambda M x`` and ``M``-orthonormalize the eigenvectors.

    Parameters
    ----------
    A_op : array_like or sparse matrix
        Symmetric operator (the block operator, or an SPD ``A``).
    m_sym : array_like
        Symmetric, nonsingular, possibly indefinite smoother.
    imag_tol : float
        Eigenvalues with ``|Im| <= imag_tol * max|lambda|`` are treated as
        real. Larger imaginary parts raise :class:`ComplexSpectrumError`
        unless ``keep_complex`` is set.
    keep_complex : bool
        Keep complex-conjugate clusters as real invariant subspaces (two real
        columns per conjugate pair) instead of raising.
    cluster_tol : float
        Relative distance under which eigenvalues share one cluster.
    degeneracy_floor : float
        Relative floor on ``|v^T M v|`` (w.r.t. ``||M||_inf``) below which a
        normalized vector is declared neutral.

    Returns
    -------
    Spectrum
        Eigenpairs sorted ascending by real part; ties keep the solver's
        output order.
    """
    a = as_dense(A_op)
    m = as_dense(m_sym)
    n = a.shape[0]
    k = sla.lu_solve(lu(m, "symmetrized smoother"), a)
    lam, x = sla.eig(k)
    scale = max(float(np.max(np.abs(lam))), np.finfo(float).tiny)
    big = np.abs(lam.imag) > imag_tol * scale
    if big.any() and not keep_complex:
        worst = lam[np.argmax(np.abs(lam.imag))]
        raise ComplexSpectrumError(
            f"{int(big.sum())} eigenvalues have |Im| above {imag_tol:g}*max|lambda|; "
            f"largest at {worst.real:.6g}{worst.imag:+.3g}j. The pencil has no real ordering; "
            "pass keep_complex=True to keep conjugate pairs as real 2-column blocks"
        )
    order = np.argsort(lam.real, kind="stable")
    lam, x = lam[order], x[:, order]

    m_scale = float(np.max(np.abs(m).sum(axis=1)))
    vecs = np.empty((n, n))
    vals = np.empty(n)
    imag = np.zeros(n)
    signs = np.empty(n)
    lam_mat = np.zeros((n, n))
    cblocks = []
    max_imag = 0.0
    pos = 0
    for members in _clusters(lam, cluster_tol * scale):
        c = len(members)
        zs = lam[members]
        raw = np.hstack([x[:, members].real, x[:, members].imag])
        u, s, _ = np.linalg.svd(raw, full_matrices=False)
        if s[c - 1] <= SPAN_TOL * s[0]:
            raise DefectiveSpectrumError(
                f"eigenvectors for the cluster at lambda~{zs[0].real:.6g} (size {c}) do not span it "
                f"(singular value ratio {s[c - 1] / s[0]:.2e})"
            )
        y = u[:, :c]
        w, q = np.linalg.eigh(sym(y.T @ m @ y))
        if np.min(np.abs(w)) < degeneracy_floor * m_scale:
            raise NeutralVectorError(
                f"cluster at lambda~{zs[0].real:.6g} contains an M-neutral direction "
                f"(|v^T M v| = {np.min(np.abs(w)):.3e} for a unit vector, ||M||_inf = {m_scale:.3e})"
            )
        y = (y @ q) / np.sqrt(np.abs(w))
        sl = slice(pos, pos + c)
        vecs[:, sl] = y
        signs[sl] = np.sign(w)
        is_real = np.max(np.abs(zs.imag)) <= imag_tol * scale
        if is_real:
            vals[sl] = np.sort(zs.real)
            lam_mat[sl, sl] = np.diag(vals[sl])
            max_imag = max(max_imag, float(np.max(np.abs(zs.imag))))
        else:
            zs = zs[np.argsort(-zs.imag, kind="stable")]
            vals[sl] = zs.real
            imag[sl] = zs.imag
            lam_mat[sl, sl] = signs[sl, None] * (y.T @ a @ y)
            cblocks.append((pos, pos + c))
        pos += c
    if cblocks:
        log.warning(
            "kept %d complex cluster(s); largest |Im lambda| = %.3e",
            len(cblocks),
            float(np.max(np.abs(imag))),
        )
    return Spectrum(
        values=vals,
        vectors=vecs,
        norm_signs=signs,
        max_imag=max_imag,
        imag=imag,
        lam=lam_mat,
        complex_blocks=tuple(cblocks),
    )


def orthonormality_residual(spec: Spectrum, m_sym) -> float:
    """``max |V^T M V - diag(norm_signs)|``."""
    v = spec.vectors
    g = v.T @ as_dense(m_sym) @ v
    return float(np.max(np.abs(g - np.diag(spec.norm_signs))))


def eig_residual(spec: Spectrum, A_op, m_sym) -> float:
    """``||A V - M V lam||_F / ||A||_F``."""
    a = as_dense(A_op)
    v = spec.vectors
    r = a @ v - as_dense(m_sym) @ v @ spec.lam
    return float(np.linalg.norm(r) / np.linalg.norm(a))


def write_spectrum_csv(spec: Spectrum, path) -> None:
    """CSV with ``index,lambda,norm_sign`` (plus ``lambda_imag`` when complex
    clusters were kept)."""
    cplx = bool(spec.complex_blocks)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["index", "lambda", "norm_sign"] + (["lambda_imag"] if cplx else []))
        for i in range(spec.n):
            row = [i, format(spec.values[i], ".17g"), int(spec.norm_signs[i])]
            if cplx:
                row.append(format(spec.imag[i], ".17g"))
            w.writerow(row)
