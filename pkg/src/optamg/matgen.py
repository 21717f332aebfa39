"""Test operators: 2D Poisson, 2D upwind advection-diffusion, random sparse.

All generators return canonical :class:`scipy.sparse.csr_matrix` objects
(sorted column indices, no duplicate or explicit zero entries) and are pure
functions of their arguments.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
import math

import numpy as np
import scipy.sparse as sp

__all__ = [
    "DEFAULT_ALPHA",
    "DEFAULT_B",
    "ProblemSpec",
    "canonical_csr",
    "laplacian_2d",
    "poisson_2d",
    "advdiff_2d",
    "random_nonsym",
    "generate",
]

DEFAULT_ALPHA = 0.1
DEFAULT_B = (math.sqrt(2.0 / 3.0), math.sqrt(1.0 / 3.0))

KINDS = ("poisson2d", "advdiff2d", "random")


@dataclass(frozen=True)
class ProblemSpec:
    """Parameters identifying one test operator.

    Only the fields relevant to ``kind`` are used: ``grid_n`` for the two grid
    problems, ``alpha``/``b_vec`` for advection-diffusion and
    ``n``/``density``/``seed`` for random matrices.
    """

    kind: str = "advdiff2d"
    grid_n: int = 16
    alpha: float = DEFAULT_ALPHA
    b_vec: tuple[float, float] = field(default=DEFAULT_B)
    n: int = 64
    density: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown problem kind {self.kind!r}; expected one of {KINDS}")
        if self.grid_n < 1:
            raise ValueError("grid_n must be >= 1")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if len(self.b_vec) != 2:
            raise ValueError("b_vec must have two components")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not 0 < self.density <= 1:
            raise ValueError("density must lie in (0, 1]")
        object.__setattr__(self, "b_vec", (float(self.b_vec[0]), float(self.b_vec[1])))

    def describe(self) -> str:
        """One-line ``key=value`` summary of the fields used by ``kind``."""
        d = asdict(self)
        keys = {
            "poisson2d": ("kind", "grid_n"),
            "advdiff2d": ("kind", "grid_n", "alpha", "b_vec"),
            "random": ("kind", "n", "density", "seed"),
        }[self.kind]
        parts = []
        for k in keys:
            v = d[k]
            if k == "b_vec":
                v = f"{v[0]!r},{v[1]!r}"
            parts.append(f"{k}={v}")
        return " ".join(parts)


def canonical_csr(a) -> sp.csr_matrix:
    """Return ``a`` as CSR with sorted indices and no stored zeros."""
    a = sp.csr_matrix(a, dtype=np.float64, copy=True)
    a.sum_duplicates()
    a.eliminate_zeros()
    a.sort_indices()
    return a


def _grid_coo(grid_n: int, stencil):
    # row-major numbering, x fastest: node (i, j) -> i + j*grid_n
    rows, cols, vals = [], [], []
    for j in range(grid_n):
        for i in range(grid_n):
            r = i + j * grid_n
            for di, dj, v in stencil:
                ii, jj = i + di, j + dj
                if 0 <= ii < grid_n and 0 <= jj < grid_n and v != 0.0:
                    rows.append(r)
                    cols.append(ii + jj * grid_n)
                    vals.append(v)
    n = grid_n * grid_n
    return sp.coo_matrix((vals, (rows, cols)), shape=(n, n))


def laplacian_2d(grid_n: int, h: float) -> sp.csr_matrix:
    """5-point ``-Laplacian`` on a ``grid_n x grid_n`` interior grid with spacing ``h``."""
    if grid_n < 1:
        raise ValueError("grid_n must be >= 1")
    c, o = 4.0 / h**2, -1.0 / h**2
    stencil = [(0, 0, c), (-1, 0, o), (1, 0, o), (0, -1, o), (0, 1, o)]
    return canonical_csr(_grid_coo(grid_n, stencil))


def poisson_2d(grid_n: int) -> sp.csr_matrix:
    """Dirichlet Poisson matrix on the unit square, ``h = 1/(grid_n+1)``.

    Examples
    --------
    >>> poisson_2d(1).toarray()
    array([[16.]])
    """
    return laplacian_2d(grid_n, 1.0 / (grid_n + 1))


def advdiff_2d(grid_n: int, alpha: float = DEFAULT_ALPHA, b_vec=DEFAULT_B) -> sp.csr_matrix:
    """Upwind finite differences for ``-alpha*Lap(u) + b.grad(u)`` on ``[-1, 1]^2``.

    Diffusion uses the 5-point stencil scaled by ``alpha/h^2`` and each
    advection component a first-order one-sided difference taken from the
    upstream side, ``h = 2/(grid_n+1)``. Homogeneous Dirichlet boundary.

    Parameters
    ----------
    grid_n : int
        Interior points per dimension.
    alpha : float
        Diffusion coefficient, > 0.
    b_vec : sequence of 2 floats
        Constant advection velocity ``(b_x, b_y)``.

    Returns
    -------
    csr_matrix
        ``grid_n**2`` square matrix, nonsymmetric whenever ``b_vec != 0``.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    bx, by = float(b_vec[0]), float(b_vec[1])
    h = 2.0 / (grid_n + 1)
    a = alpha * laplacian_2d(grid_n, h)
    stencil = [(0, 0, (abs(bx) + abs(by)) / h)]
    # b>0: b*(u_i - u_{i-1})/h ; b<0: b*(u_{i+1} - u_i)/h
    if bx > 0:
        stencil.append((-1, 0, -bx / h))
    elif bx < 0:
        stencil.append((1, 0, bx / h))
    if by > 0:
        stencil.append((0, -1, -by / h))
    elif by < 0:
        stencil.append((0, 1, by / h))
    if bx == 0.0 and by == 0.0:
        return a
    return canonical_csr(a + _grid_coo(grid_n, stencil).tocsr())


def random_nonsym(n: int, density: float, seed: int) -> sp.csr_matrix:
    """Random strictly diagonally dominant nonsymmetric sparse matrix.

    ``round(density * n**2)`` off-diagonal positions (capped at ``n*(n-1)``)
    are drawn without replacement, values uniform on ``[-1, 1]``; then every
    diagonal entry is set to ``1 + sum_j |a_ij|`` over the off-diagonals.
    The bit stream comes from ``numpy.random.default_rng(seed)`` (PCG64), see
    ``docs/file-formats.md`` for the exact draw order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0 < density <= 1:
        raise ValueError("density must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    slots = n * (n - 1)
    m = min(int(round(density * n * n)), slots)
    if m > 0:
        picks = np.sort(rng.choice(slots, size=m, replace=False))
        vals = rng.uniform(-1.0, 1.0, size=m)
    else:
        picks = np.zeros(0, dtype=np.int64)
        vals = np.zeros(0)
    rows = picks // max(n - 1, 1)
    r = picks % max(n - 1, 1)
    cols = r + (r >= rows)
    off = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    diag = 1.0 + np.asarray(abs(off).sum(axis=1)).ravel()
    return canonical_csr(off + sp.diags(diag))


def generate(spec: ProblemSpec) -> sp.csr_matrix:
    """Build the matrix described by ``spec``."""
    if spec.kind == "poisson2d":
        return poisson_2d(spec.grid_n)
    if spec.kind == "advdiff2d":
        return advdiff_2d(spec.grid_n, spec.alpha, spec.b_vec)
    return random_nonsym(spec.n, spec.density, spec.seed)
