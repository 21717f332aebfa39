import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from optamg.analysis import (
    RateRecord,
    power_rates,
    read_records,
    records_from_csv,
    records_to_csv,
    spectral_radius,
    sweep,
    theory_rate,
    write_records,
)
from optamg.eigsolve import Spectrum


def _spec(values):
    values = np.asarray(values, dtype=float)
    return Spectrum(values=values, vectors=np.eye(len(values)), norm_signs=np.ones(len(values)))


def test_theory_rate_examples():
    assert theory_rate(_spec([0.2, 0.5, 0.9]), 1) == pytest.approx((0.5, 0.5))
    assert theory_rate(_spec([0.2, 0.5, 1.7]), 1) == pytest.approx((0.5, 0.7))
    with pytest.raises(ValueError):
        theory_rate(_spec([0.2, 0.5]), 2)


@pytest.mark.parametrize(
    "e,rho",
    [(np.diag([0.5, -0.7]), 0.7), (np.array([[0.0, 1.0], [0.0, 0.0]]), 0.0), (np.array([[0.0, -0.3], [0.3, 0.0]]), 0.3)],
)
def test_spectral_radius_examples(e, rho):
    assert spectral_radius(e) == pytest.approx(rho, abs=1e-15)


def test_power_method_diagonal():
    pr = power_rates(np.diag([0.5, 0.2]), np.eye(2), iters=60)
    assert pr.err_rate == pytest.approx(0.5, rel=1e-12)
    assert pr.res_rate == pytest.approx(0.5, rel=1e-12)
    assert not pr.vanished and pr.history.shape == (60, 2)


def test_power_method_zero_operator():
    pr = power_rates(np.zeros((3, 3)), np.eye(3), iters=10)
    assert pr.vanished and pr.err_rate == 0.0 and pr.res_rate == 0.0


def test_power_method_deterministic():
    e = np.random.default_rng(3).standard_normal((6, 6)) * 0.2
    a, b = power_rates(e, np.eye(6), 40, seed=9), power_rates(e, np.eye(6), 40, seed=9)
    np.testing.assert_array_equal(a.history, b.history)


def test_power_method_rejects_zero_iters():
    with pytest.raises(ValueError):
        power_rates(np.eye(2), np.eye(2), iters=0)


def test_sweep_full_coarse_space(poisson4):
    a, sm, s = poisson4
    (rec,) = sweep(a, sm.m_sym, s, [16], iters=20)
    assert rec.n_c == 16 and math.isnan(rec.lambda_next)
    assert rec.rho_exact == pytest.approx(0.0, abs=1e-10)
    assert rec.theory_rate == rec.robust_rate == 0.0


def test_sweep_matches_theory_and_is_sorted(block_adv8):
    bs, sm, s = block_adv8
    recs = sweep(bs.block, sm.m_sym, s, [64, 16, 32], iters=300)
    assert [r.n_c for r in recs] == [16, 32, 64]
    for r in recs:
        assert abs(r.rho_exact - r.robust_rate) <= 1e-8
        assert r.err_rate <= r.rho_exact * 1.05 + 1e-12
    again = sweep(bs.block, sm.m_sym, s, [64, 16, 32], iters=300)
    assert recs == again


def test_sweep_rejects_bad_lists(poisson4):
    a, sm, s = poisson4
    for bad in ([], [0], [17]):
        with pytest.raises(ValueError):
            sweep(a, sm.m_sym, s, bad)


finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=50)
@given(st.lists(st.tuples(st.integers(1, 10**6), finite, finite, finite, finite, finite, finite, st.integers(1, 10**4)), max_size=8))
def test_csv_roundtrip(rows):
    recs = [RateRecord(*r) for r in rows]
    assert records_from_csv(records_to_csv(recs)) == recs


def test_csv_file_roundtrip_with_nan(tmp_path):
    recs = [RateRecord(4, float("nan"), 0.0, 0.0, 1e-17, 0.0, 0.0, 3)]
    write_records(recs, tmp_path / "r.csv")
    text = (tmp_path / "r.csv").read_text()
    assert text.splitlines()[0] == "n_c,lambda_next,theory_rate,robust_rate,rho_exact,err_rate,res_rate,iters"
    back = read_records(tmp_path / "r.csv")
    assert math.isnan(back[0].lambda_next) and back[0].rho_exact == 1e-17


def test_csv_header_checked():
    with pytest.raises(ValueError):
        records_from_csv("a,b\n1,2\n")
