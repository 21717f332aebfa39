import numpy as np
import pytest

from optamg.analysis import read_records
from optamg.cli import main, parse_nc_list, UsageError
from optamg.matgen import poisson_2d
from optamg.mmio import read_matrix


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_advdiff_sizes(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "--out-dir", str(tmp_path))
    assert code == 0
    assert read_matrix(tmp_path / "A.mtx").shape == (256, 256)
    assert read_matrix(tmp_path / "block.mtx").shape == (512, 512)
    assert (tmp_path / "A.mtx").read_text().splitlines()[1].startswith("% problem: ")


def test_gen_poisson_spd(tmp_path, capsys):
    code, _, _ = run(capsys, "gen", "--problem", "poisson2d", "--grid-n", "4", "--spd", "--out-dir", str(tmp_path))
    assert code == 0
    assert (read_matrix(tmp_path / "A.mtx") != poisson_2d(4)).nnz == 0
    assert not (tmp_path / "block.mtx").exists()


def test_gen_random_byte_identical(tmp_path, capsys):
    args = ["gen", "--problem", "random", "--n", "20", "--density", "0.2", "--seed", "5"]
    assert run(capsys, *args, "--out-dir", str(tmp_path / "a"))[0] == 0
    assert run(capsys, *args, "--out-dir", str(tmp_path / "b"))[0] == 0
    for name in ("A.mtx", "block.mtx"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_verify_spd_passes(capsys):
    code, out, _ = run(capsys, "verify", "--problem", "poisson2d", "--grid-n", "4", "--spd", "--nc-list", "1..15")
    assert code == 0, out
    assert "FAIL" not in out and "all checks passed" in out
    assert out.startswith("# problem: ")


def test_verify_block_passes(capsys):
    code, out, _ = run(capsys, "verify", "--grid-n", "8")
    assert code == 0, out
    assert "INFO" in out  # the block M + M^T - A eigenvalue is reported, not judged


def test_verify_detects_perturbation(capsys):
    code, out, _ = run(capsys, "verify", "--problem", "poisson2d", "--grid-n", "3", "--spd", "--perturb-msym", "0,1")
    assert code == 1
    assert "FAIL" in out


def test_verify_perturb_out_of_range(capsys):
    code, _, err = run(capsys, "verify", "--problem", "poisson2d", "--grid-n", "3", "--spd", "--perturb-msym", "9,0")
    assert code == 2 and "usage error" in err


def test_sweep_full_coarse_space(tmp_path, capsys):
    code, _, _ = run(capsys, "sweep", "--problem", "poisson2d", "--grid-n", "3", "--spd", "--nc-list", "9", "--iters", "5", "--out-dir", str(tmp_path))
    assert code == 0
    (rec,) = read_records(tmp_path / "rates.csv")
    assert rec.n_c == 9 and rec.rho_exact == pytest.approx(0.0, abs=1e-10)
    for name in ("rates.svg", "spy.svg"):
        assert (tmp_path / name).stat().st_size > 0


def test_sweep_grid16_needs_keep_complex(tmp_path, capsys):
    code, _, err = run(capsys, "sweep", "--out-dir", str(tmp_path), "--nc-list", "32")
    assert code == 1
    assert "optamg.eigsolve" in err and "ComplexSpectrumError" in err


def test_spectrum_and_spy(tmp_path, capsys):
    assert run(capsys, "spectrum", "--grid-n", "4", "--out-dir", str(tmp_path))[0] == 0
    lines = (tmp_path / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "index,lambda,norm_sign" and len(lines) == 33
    assert run(capsys, "spy", "--grid-n", "4", "--out-dir", str(tmp_path))[0] == 0
    assert (tmp_path / "spy.svg").exists()


def test_config_file_with_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# small SPD run\nproblem = poisson2d\ngrid_n = 3\nspd = true\nnc_list = 1..8\niters = 10\n")
    code, out, _ = run(capsys, "sweep", "--config", str(cfg), "--grid-n", "2", "--nc-list", "1,2,3", "--out-dir", str(tmp_path))
    assert code == 0
    assert "grid_n=2" in out
    assert [r.n_c for r in read_records(tmp_path / "rates.csv")] == [1, 2, 3]


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--grid-n", "0"],
        ["sweep", "--problem", "poisson2d", "--grid-n", "2", "--spd", "--nc-list", "5"],
        ["sweep", "--nc-list", "3,2"],
        ["sweep", "--nc-list", "x"],
        ["sweep", "--iters", "0"],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(capsys, *argv)[0] == 2


def test_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run(capsys, "gen", "--config", str(cfg))[0] == 2


def test_io_errors(tmp_path, capsys):
    assert run(capsys, "gen", "--config", str(tmp_path / "missing.cfg"))[0] == 3
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run(capsys, "gen", "--grid-n", "2", "--out-dir", str(blocker / "sub"))[0] == 3


def test_argparse_rejects_unknown_problem(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gen", "--problem", "dg"])
    assert exc.value.code == 2


@pytest.mark.parametrize("text,expected", [("32,64", [32, 64]), ("1..4", [1, 2, 3, 4]), ("32:129:32", [32, 64, 96, 128])])
def test_parse_nc_list(text, expected):
    assert parse_nc_list(text) == expected


def test_parse_nc_list_empty():
    with pytest.raises(UsageError):
        parse_nc_list(",")
