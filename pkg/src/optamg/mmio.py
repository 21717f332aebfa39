"""Matrix Market writer with byte-stable output, reader delegated to scipy."""

from __future__ import annotations

import os

import numpy as np
import scipy.io
import scipy.sparse as sp

__all__ = ["write_coordinate", "write_array", "read_matrix"]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _comment_lines(comment: str | None) -> list[str]:
    if not comment:
        return []
    return ["% " + line for line in comment.splitlines()]


def write_coordinate(path, a, comment: str | None = None) -> None:
    """Write ``a`` (sparse or dense) in ``coordinate real general`` format.

    Dense inputs are written entry by entry, skipping exact zeros. Entries
    appear in row-major order, so identical matrices give identical bytes.
    """
    a = sp.csr_matrix(a, dtype=np.float64)
    a.sum_duplicates()
    a.eliminate_zeros()
    a.sort_indices()
    coo = a.tocoo()
    lines = ["%%MatrixMarket matrix coordinate real general"]
    lines += _comment_lines(comment)
    lines.append(f"{a.shape[0]} {a.shape[1]} {a.nnz}")
    lines += [f"{i + 1} {j + 1} {_fmt(v)}" for i, j, v in zip(coo.row, coo.col, coo.data)]
    _write(path, lines)


def write_array(path, a, comment: str | None = None) -> None:
    """Write a dense matrix in ``array real general`` (column-major) format."""
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    lines = ["%%MatrixMarket matrix array real general"]
    lines += _comment_lines(comment)
    lines.append(f"{a.shape[0]} {a.shape[1]}")
    lines += [_fmt(v) for v in a.ravel(order="F")]
    _write(path, lines)


def _write(path, lines) -> None:
    with open(os.fspath(path), "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def read_matrix(path):
    """Read a Matrix Market file; coordinate files come back as CSR."""
    m = scipy.io.mmread(os.fspath(path))
    if sp.issparse(m):
        return sp.csr_matrix(m)
    return np.asarray(m)
