"""The 2x2 block symmetric indefinite operator ``[[0, A], [A^T, 0]]``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .errors import DenseLimitError
from .matgen import canonical_csr

__all__ = ["BlockSystem", "BlockSpectrumReport", "build_block", "verify_block_spectrum", "DENSE_LIMIT"]

DENSE_LIMIT = 1024


@dataclass(frozen=True)
class BlockSystem:
    """A square operator ``a`` of size ``k`` and its ``2k`` block form."""

    a: sp.csr_matrix
    block: sp.csr_matrix

    @property
    def k(self) -> int:
        return self.a.shape[0]

    def apply(self, z, x):
        """Return ``(A x, A^T z)``, the two halves of ``block @ [z; x]``."""
        return self.a @ x, self.a.T @ z


@dataclass(frozen=True)
class BlockSpectrumReport:
    max_pairing_error: float
    ok: bool
    eigenvalues: np.ndarray
    singular_values: np.ndarray


def build_block(a) -> BlockSystem:
    """Assemble ``[[0, a], [a^T, 0]]``.

    >>> build_block(np.array([[1.0]])).block.toarray()
    array([[0., 1.],
           [1., 0.]])
    """
    a = canonical_csr(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"block system needs a square operator, got shape {a.shape}")
    block = sp.bmat([[None, a], [a.T, None]], format="csr")
    return BlockSystem(a=a, block=canonical_csr(block))


def verify_block_spectrum(bs: BlockSystem, tol: float = 1e-10, dense_limit: int = DENSE_LIMIT) -> BlockSpectrumReport:
    """Compare ``eig(block)`` against ``{+sigma_i(A), -sigma_i(A)}``.

    Both lists are computed densely and sorted; the report carries the
    largest absolute mismatch and whether it is at most ``tol``.
    """
    if bs.k > dense_limit:
        raise DenseLimitError(f"k={bs.k} exceeds dense limit {dense_limit}")
    eigs = sla.eigvalsh(bs.block.toarray())
    sigma = sla.svdvals(bs.a.toarray())
    paired = np.sort(np.concatenate([sigma, -sigma]))
    err = float(np.max(np.abs(np.sort(eigs) - paired))) if eigs.size else 0.0
    return BlockSpectrumReport(max_pairing_error=err, ok=err <= tol, eigenvalues=np.sort(eigs), singular_values=sigma)
