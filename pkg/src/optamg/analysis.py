"""Convergence measurements: exact spectral radii, predicted rates and
power-method reduction rates over sweeps of coarse-space sizes."""

from __future__ import annotations

import csv
from dataclasses import astuple, dataclass, fields
import io
from typing import NamedTuple

import numpy as np
import scipy.linalg as sla

from ._linalg import as_dense, lu
from .eigsolve import Spectrum
from .twogrid import optimal_interpolation, two_grid_error

__all__ = [
    "RateRecord",
    "PowerResult",
    "spectral_radius",
    "power_rates",
    "theory_rate",
    "sweep",
    "records_to_csv",
    "records_from_csv",
    "write_records",
    "read_records",
    "CSV_HEADER",
]

CSV_HEADER = ["n_c", "lambda_next", "theory_rate", "robust_rate", "rho_exact", "err_rate", "res_rate", "iters"]


@dataclass(frozen=True)
class RateRecord:
    n_c: int
    lambda_next: float
    theory_rate: float
    robust_rate: float
    rho_exact: float
    err_rate: float
    res_rate: float
    iters: int


class PowerResult(NamedTuple):
    err_rate: float
    res_rate: float
    history: np.ndarray  # shape (iters, 2): error ratio, residual ratio
    vanished: bool


def spectral_radius(e) -> float:
    """Largest eigenvalue modulus of a dense square matrix."""
    e = as_dense(e)
    if e.shape[0] != e.shape[1]:
        raise ValueError("spectral radius needs a square matrix")
    if e.size == 0:
        return 0.0
    return float(np.max(np.abs(sla.eigvals(e))))


def power_rates(e, A_op, iters: int = 500, seed: int = 0) -> PowerResult:
    """Error and residual reduction ratios of ``e_{k+1} = E e_k``.

    Starts from a standard-normal vector (``default_rng(seed)``) scaled to
    unit length. Each step records ``||e_{k+1}|| / ||e_k||`` and
    ``||A e_{k+1}|| / ||A e_k||`` before renormalizing ``e_{k+1}``. The
    reported rates are those of the last step. If the iterate vanishes
    (``E`` annihilates it) both rates are 0 and ``vanished`` is set.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    e = as_dense(e)
    a = as_dense(A_op)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(e.shape[0])
    x /= np.linalg.norm(x)
    ax = a @ x
    hist = np.zeros((iters, 2))
    tiny = np.finfo(float).tiny
    for k in range(iters):
        y = e @ x
        ny = np.linalg.norm(y)
        ay = a @ y
        nax = np.linalg.norm(ax)
        if ny <= tiny or nax <= tiny:
            return PowerResult(0.0, 0.0, hist[: k + 1], True)
        hist[k] = ny / np.linalg.norm(x), np.linalg.norm(ay) / nax
        x = y / ny
        ax = ay / ny
    return PowerResult(float(hist[-1, 0]), float(hist[-1, 1]), hist, False)


def theory_rate(spec: Spectrum, n_c: int) -> tuple[float, float]:
    """Return ``(1 - lambda_{n_c+1}, max_{i > n_c} |1 - lambda_i|)``.

    ``n_c`` is the coarse dimension, so the zero-based entry ``values[n_c]``
    is the first eigenvalue left to the smoother. Complex eigenvalues enter
    the robust rate through their modulus.
    """
    if not 0 <= n_c < spec.n:
        raise ValueError(f"n_c={n_c} outside 0..{spec.n - 1}")
    rest = spec.eigenvalues[n_c:]
    return float(1.0 - spec.values[n_c]), float(np.max(np.abs(1.0 - rest)))


def sweep(A_op, m_sym, spec: Spectrum, nc_list, iters: int = 500, seed: int = 0) -> list[RateRecord]:
    """Fill one :class:`RateRecord` per coarse size, ascending in ``n_c``.

    ``n_c == n`` is accepted: the coarse space is everything, every rate is 0.
    """
    ncs = sorted(int(c) for c in nc_list)
    if not ncs:
        raise ValueError("nc_list is empty")
    a = as_dense(A_op)
    n = a.shape[0]
    if ncs[0] < 1 or ncs[-1] > n:
        raise ValueError(f"n_c values must lie in 1..{n}")
    lu(m_sym, "symmetrized smoother")
    out = []
    for nc in ncs:
        e = two_grid_error(a, m_sym, optimal_interpolation(spec, nc))
        if nc < n:
            theory, robust = theory_rate(spec, nc)
            lam_next = float(spec.values[nc])
        else:
            theory = robust = 0.0
            lam_next = float("nan")
        pr = power_rates(e, a, iters, seed)
        out.append(
            RateRecord(
                n_c=nc,
                lambda_next=lam_next,
                theory_rate=theory,
                robust_rate=robust,
                rho_exact=spectral_radius(e),
                err_rate=pr.err_rate,
                res_rate=pr.res_rate,
                iters=len(pr.history),
            )
        )
    return out


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow([_fmt(v) for v in astuple(r)])
    return buf.getvalue()


def records_from_csv(text: str) -> list[RateRecord]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != CSV_HEADER:
        raise ValueError(f"expected CSV header {','.join(CSV_HEADER)}")
    types = [f.type for f in fields(RateRecord)]
    conv = [int if t in (int, "int") else float for t in types]
    return [RateRecord(*(c(v) for c, v in zip(conv, row))) for row in rows[1:] if row]


def write_records(records, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(records_to_csv(records))


def read_records(path) -> list[RateRecord]:
    with open(path, newline="") as fh:
        return records_from_csv(fh.read())
