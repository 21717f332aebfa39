"""Command line entry point: ``twogrid {gen,verify,sweep,spy,spectrum}``.

Settings come from built-in defaults, then an optional ``key=value`` config
file (``--config``), then command-line flags; later sources win.

Exit status: 0 success, 1 numerical failure (a failed check or a
mathematically meaningful error), 2 usage/config error, 3 I/O error.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field
import logging
import os
from pathlib import Path
import sys
import traceback

import numpy as np

from . import __version__
from ._linalg import as_dense, rel_fro, solve
from .analysis import spectral_radius, sweep, theory_rate, write_records
from .blocksys import DENSE_LIMIT, build_block, verify_block_spectrum
from .eigsolve import IMAG_TOL, eig_residual, generalized_eig, orthonormality_residual, write_spectrum_csv
from .errors import NumericalError
from .matgen import DEFAULT_ALPHA, DEFAULT_B, ProblemSpec, generate
from .mmio import write_coordinate
from .report import rates_svg, spy_svg
from .smoother import check_convergent, kaczmarz_smoother, kaczmarz_sweep, smoother_propagator
from .twogrid import anorm_of_operator, optimal_interpolation, two_grid_error

log = logging.getLogger("optamg")

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3

CONFIG_KEYS = {
    "problem": str,
    "grid_n": int,
    "alpha": float,
    "bx": float,
    "by": float,
    "n": int,
    "density": float,
    "seed": int,
    "nc_list": str,
    "iters": int,
    "spd": "bool",
    "out_dir": str,
    "imag_tol": float,
    "dense_limit": int,
    "keep_complex": "bool",
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    problem: ProblemSpec
    spd_mode: bool = False
    nc_list: list | None = None
    power_iters: int = 500
    seed: int = 0
    imag_tol: float = IMAG_TOL
    dense_limit: int = DENSE_LIMIT
    out_dir: Path = field(default_factory=lambda: Path("out"))
    keep_complex: bool = False

    def header(self) -> str:
        mode = "spd (operator A)" if self.spd_mode else "block (operator [[0,A],[A^T,0]])"
        return (
            f"# problem: {self.problem.describe()}\n"
            f"# mode: {mode}; smoother: Kaczmarz, symmetrized M~ = M^T (M^T + M - A)^-1 M\n"
            f"# power iterations: {self.power_iters}; seed: {self.seed}; imag_tol: {self.imag_tol:g}; "
            f"keep_complex: {self.keep_complex}"
        )


def _parse_bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {s!r}")


def parse_nc_list(text: str) -> list[int]:
    """``"32,64,128"``, ``"1..15"`` (inclusive) or ``"32:449:32"`` (range)."""
    out = []
    for part in str(text).replace(" ", "").split(","):
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif ":" in part:
                out.extend(range(*(int(t) for t in part.split(":"))))
            else:
                out.append(int(part))
        except ValueError as exc:
            raise UsageError(f"bad nc list entry {part!r}") from exc
    if not out:
        raise UsageError("empty nc list")
    return out


def read_config_file(path) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, val = (t.strip() for t in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = val
    return values


def _coerce(key, val):
    kind = CONFIG_KEYS[key]
    if isinstance(val, str):
        try:
            if kind == "bool":
                return _parse_bool(val)
            return kind(val)
        except ValueError as exc:
            raise UsageError(f"bad value for {key}: {val!r}") from exc
    return val


def build_config(args: argparse.Namespace) -> RunConfig:
    merged = {}
    if args.config:
        merged.update(read_config_file(args.config))
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            merged[key] = v
    vals = {k: _coerce(k, v) for k, v in merged.items()}
    try:
        spec = ProblemSpec(
            kind=vals.get("problem", "advdiff2d"),
            grid_n=vals.get("grid_n", 16),
            alpha=vals.get("alpha", DEFAULT_ALPHA),
            b_vec=(vals.get("bx", DEFAULT_B[0]), vals.get("by", DEFAULT_B[1])),
            n=vals.get("n", 64),
            density=vals.get("density", 0.1),
            seed=vals.get("seed", 0),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    cfg = RunConfig(
        problem=spec,
        spd_mode=vals.get("spd", False),
        nc_list=parse_nc_list(vals["nc_list"]) if "nc_list" in vals else None,
        power_iters=vals.get("iters", 500),
        seed=vals.get("seed", 0),
        imag_tol=vals.get("imag_tol", IMAG_TOL),
        dense_limit=vals.get("dense_limit", DENSE_LIMIT),
        out_dir=Path(vals.get("out_dir", "out")),
        keep_complex=vals.get("keep_complex", False),
    )
    if cfg.power_iters < 1:
        raise UsageError("iters must be >= 1")
    if cfg.nc_list is not None and cfg.nc_list != sorted(cfg.nc_list):
        raise UsageError("nc_list must be ascending")
    return cfg


@dataclass
class Experiment:
    a: object
    op: object
    block: object
    smoother: object


def operator_size(cfg: RunConfig) -> int:
    p = cfg.problem
    k = p.grid_n**2 if p.kind != "random" else p.n
    return k if cfg.spd_mode else 2 * k


def resolve_nc_list(cfg: RunConfig) -> list[int]:
    n = operator_size(cfg)
    if cfg.nc_list is None:
        step = max(1, n // 16)
        return list(range(step, n, step))
    bad = [c for c in cfg.nc_list if not 1 <= c <= n]
    if bad:
        raise UsageError(f"n_c values {bad} outside 1..{n} for this operator")
    return list(cfg.nc_list)


def build_experiment(cfg: RunConfig) -> Experiment:
    a = generate(cfg.problem)
    if cfg.spd_mode:
        block, op = None, a
    else:
        block = build_block(a)
        op = block.block
    if op.shape[0] > cfg.dense_limit * (1 if cfg.spd_mode else 2):
        raise NumericalError(f"operator size {op.shape[0]} exceeds dense limit {cfg.dense_limit}")
    log.info("built %s operator of size %d", "spd" if cfg.spd_mode else "block", op.shape[0])
    return Experiment(a=a, op=op, block=block, smoother=kaczmarz_smoother(op))


def _spectrum(cfg, ex):
    return generalized_eig(ex.op, ex.smoother.m_sym, cfg.imag_tol, keep_complex=cfg.keep_complex)


# -- commands -----------------------------------------------------------------


def cmd_gen(cfg: RunConfig) -> int:
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    a = generate(cfg.problem)
    note = cfg.problem.describe()
    write_coordinate(cfg.out_dir / "A.mtx", a, comment=f"problem: {note}")
    print(f"wrote {cfg.out_dir / 'A.mtx'} ({a.shape[0]}x{a.shape[1]}, nnz={a.nnz})")
    if not cfg.spd_mode:
        bs = build_block(a)
        write_coordinate(cfg.out_dir / "block.mtx", bs.block, comment=f"problem: {note}\nblock: [[0, A], [A^T, 0]]")
        print(f"wrote {cfg.out_dir / 'block.mtx'} ({bs.block.shape[0]}x{bs.block.shape[1]}, nnz={bs.block.nnz})")
    return EXIT_OK


@dataclass
class Check:
    name: str
    value: float
    limit: float
    ok: bool
    informational: bool = False

    def line(self) -> str:
        tag = "INFO" if self.informational else ("PASS" if self.ok else "FAIL")
        return f"{tag:4s} {self.name:<44s} measured={self.value:.3e} limit={self.limit:.1e}"


def run_checks(cfg: RunConfig, perturb_msym=None) -> list[Check]:
    """Run the verification suite; ``perturb_msym=(i, j)`` adds 1 to one
    entry of the symmetrized smoother (fault injection)."""
    ex = build_experiment(cfg)
    x_op = as_dense(ex.op)
    n = x_op.shape[0]
    sm = ex.smoother
    m_sym = sm.m_sym.copy()
    if perturb_msym is not None:
        i, j = perturb_msym
        if not (0 <= i < n and 0 <= j < n):
            raise UsageError(f"--perturb-msym index ({i}, {j}) outside 0..{n - 1}")
        m_sym[i, j] += 1.0
    checks = []

    def add(name, value, limit, informational=False):
        checks.append(Check(name, float(value), float(limit), bool(value <= limit), informational))

    if ex.block is not None:
        rep = verify_block_spectrum(ex.block, dense_limit=cfg.dense_limit)
        smax = float(rep.singular_values.max())
        add("block spectrum = {+-sigma(A)}", rep.max_pairing_error, 1e-10 * smax)
        add("block operator symmetric", abs(ex.block.block - ex.block.block.T).max(), 0.0)

    eye = np.eye(n)
    lhs = eye - solve(m_sym, x_op, "symmetrized smoother")
    rhs = smoother_propagator(sm.m, x_op) @ (eye - solve(sm.m.T, x_op, "M^T"))
    add("I - M~^-1 A = (I - M^-1 A)(I - M^-T A)", rel_fro(lhs, rhs), 1e-10)

    rng = np.random.default_rng(cfg.seed)
    x0, b = rng.standard_normal(n), rng.standard_normal(n)
    swept = kaczmarz_sweep(ex.op, x0, b)
    matrix_form = x0 + solve(sm.m, b - x_op @ x0, "M")
    add("Kaczmarz matrix form = row-action sweep", np.linalg.norm(swept - matrix_form) / np.linalg.norm(swept), 1e-12)

    if ex.block is None:
        conv = check_convergent(sm.m, x_op)
        add("M + M^T - A is SPD (-min eig)", -conv.min_eig, 0.0)
    else:
        inner = kaczmarz_smoother(ex.a)
        conv = check_convergent(inner.m, ex.a)
        add("M + M^T - A is SPD on A (-min eig)", -conv.min_eig, 0.0)
        add("rho(I - M~^-1 [[0,A],[A^T,0]]) < 1", spectral_radius(lhs), 1.0 - 1e-12)
        blk = check_convergent(sm.m, x_op)
        add("min eig of M + M^T - block (indefinite)", blk.min_eig, 0.0, informational=True)

    spec = generalized_eig(ex.op, m_sym, cfg.imag_tol, keep_complex=cfg.keep_complex)
    add("V^T M~ V = diag(signs)", orthonormality_residual(spec, m_sym), 1e-8)
    add("||A V - M~ V Lambda||_F / ||A||_F", eig_residual(spec, ex.op, m_sym), 1e-8)

    vnorm = np.linalg.norm(spec.vectors)
    worst_ann = worst_rho = worst_anorm = 0.0
    for nc in resolve_nc_list(cfg):
        if nc >= n:
            continue
        p = optimal_interpolation(spec, nc)
        e = two_grid_error(x_op, m_sym, p)
        worst_ann = max(worst_ann, np.linalg.norm(e @ p.p) / vnorm)
        worst_rho = max(worst_rho, abs(spectral_radius(e) - theory_rate(spec, nc)[1]))
        if ex.block is None:
            e_m = two_grid_error(x_op, sm.m, p)
            worst_anorm = max(worst_anorm, abs(anorm_of_operator(e_m, x_op) ** 2 - (1.0 - spec.values[nc])))
    add("||E_TG(P#) V[:, :nc]||_F / ||V||_F", worst_ann, 1e-8)
    add("|rho(E_TG(P#)) - max_{i>nc}|1 - lambda_i||", worst_rho, 1e-8)
    if ex.block is None:
        add("| ||E_TG(P#)||_A^2 - (1 - lambda_{nc+1}) |", worst_anorm, 1e-8)
    return checks


def cmd_verify(cfg: RunConfig, perturb_msym=None) -> int:
    print(cfg.header())
    checks = run_checks(cfg, perturb_msym)
    for c in checks:
        print(c.line())
    failed = [c.name for c in checks if not c.ok and not c.informational]
    if failed:
        print(f"FAILED: {'; '.join(failed)}")
        return EXIT_NUMERIC
    print("all checks passed")
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    print(cfg.header())
    ex = build_experiment(cfg)
    spec = _spectrum(cfg, ex)
    records = sweep(ex.op, ex.smoother.m_sym, spec, resolve_nc_list(cfg), cfg.power_iters, cfg.seed)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    write_records(records, cfg.out_dir / "rates.csv")
    rates_svg(records, cfg.out_dir / "rates.svg")
    spy_svg(ex.block if ex.block is not None else ex.op, cfg.out_dir / "spy.svg")
    print(f"{'n_c':>5s} {'1-lam_next':>12s} {'robust':>12s} {'rho_exact':>12s} {'err_rate':>12s} {'res_rate':>12s}")
    for r in records:
        print(f"{r.n_c:5d} {r.theory_rate:12.8f} {r.robust_rate:12.8f} {r.rho_exact:12.8f} {r.err_rate:12.8f} {r.res_rate:12.8f}")
    print(f"wrote {cfg.out_dir / 'rates.csv'}, {cfg.out_dir / 'rates.svg'}, {cfg.out_dir / 'spy.svg'}")
    return EXIT_OK


def cmd_spy(cfg: RunConfig) -> int:
    a = generate(cfg.problem)
    target = a if cfg.spd_mode else build_block(a)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    marks = spy_svg(target, cfg.out_dir / "spy.svg", title=cfg.problem.describe())
    print(f"wrote {cfg.out_dir / 'spy.svg'} ({marks} nonzeros)")
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig) -> int:
    print(cfg.header())
    ex = build_experiment(cfg)
    spec = _spectrum(cfg, ex)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    write_spectrum_csv(spec, cfg.out_dir / "spectrum.csv")
    print(f"lambda in [{spec.values[0]:.6g}, {spec.values[-1]:.6g}]; negative norm signs: {int((spec.norm_signs < 0).sum())}")
    print(f"wrote {cfg.out_dir / 'spectrum.csv'}")
    return EXIT_OK


COMMANDS = {"gen": cmd_gen, "verify": cmd_verify, "sweep": cmd_sweep, "spy": cmd_spy, "spectrum": cmd_spectrum}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("problem and run settings")
    g.add_argument("--config", help="key=value settings file; flags override it")
    g.add_argument("--problem", choices=("poisson2d", "advdiff2d", "random"))
    g.add_argument("--grid-n", dest="grid_n", type=int)
    g.add_argument("--alpha", type=float)
    g.add_argument("--bx", type=float)
    g.add_argument("--by", type=float)
    g.add_argument("--n", type=int, help="dimension of the random matrix")
    g.add_argument("--density", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--nc-list", dest="nc_list", help="e.g. 32,64,128 or 1..15 or 32:449:32")
    g.add_argument("--iters", type=int, help="power-method iterations (default 500)")
    g.add_argument("--spd", action="store_const", const=True, default=None, help="analyse A itself instead of the block operator")
    g.add_argument("--out-dir", dest="out_dir")
    g.add_argument("--imag-tol", dest="imag_tol", type=float)
    g.add_argument("--dense-limit", dest="dense_limit", type=int)
    g.add_argument(
        "--keep-complex",
        dest="keep_complex",
        action="store_const",
        const=True,
        default=None,
        help="keep complex-conjugate eigenvalue clusters as real 2-column blocks instead of failing",
    )
    parser = argparse.ArgumentParser(prog="twogrid", description="Optimal-interpolation two-grid experiments")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="write A (and the block operator) as Matrix Market")
    v = sub.add_parser("verify", parents=[common], help="run the identity and invariant checks")
    v.add_argument("--perturb-msym", dest="perturb_msym", metavar="I,J", help="fault injection: add 1 to M~[I, J]")
    sub.add_parser("sweep", parents=[common], help="rates over n_c; writes rates.csv, rates.svg, spy.svg")
    sub.add_parser("spy", parents=[common], help="sparsity plot of the operator")
    sub.add_parser("spectrum", parents=[common], help="write the sorted pencil spectrum as CSV")
    return parser


def _setup_logging() -> None:
    level = os.environ.get("TWOGRID_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def _origin(exc: BaseException) -> str:
    """Name of the innermost package module the exception passed through."""
    here = Path(__file__).parent
    name = "optamg"
    for frame in traceback.extract_tb(exc.__traceback__):
        path = Path(frame.filename)
        if path.parent == here:
            name = f"optamg.{path.stem}"
    return name


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "verify":
            pert = None
            if args.perturb_msym:
                try:
                    pert = tuple(int(t) for t in args.perturb_msym.split(","))
                except ValueError as exc:
                    raise UsageError("--perturb-msym expects I,J") from exc
            return cmd_verify(cfg, pert)
        return COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"twogrid: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"twogrid: {_origin(exc)}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"twogrid: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
