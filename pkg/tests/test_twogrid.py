import numpy as np
import pytest

from optamg.errors import NotSPDError, SingularMatrixError
from optamg.matgen import poisson_2d
from optamg.twogrid import (
    CfSplit,
    Interpolation,
    anorm_of_operator,
    cf_split_every_other,
    coarse_operator,
    ideal_interpolation,
    kappa,
    m_projection,
    optimal_interpolation,
    two_grid_error,
    two_grid_error_prepost,
)


def test_split_every_other():
    s = cf_split_every_other(4)
    assert s.f_indices == (0, 2) and s.c_indices == (1, 3)
    assert cf_split_every_other(5).c_indices == (1, 3)


@pytest.mark.parametrize("f,c", [((0, 1), (1, 2)), ((0,), (2,)), ((0, 1), ())])
def test_split_validation(f, c):
    with pytest.raises(ValueError):
        CfSplit(f, c)


def test_ideal_interpolation_two_by_two():
    a = np.array([[2.0, -1.0], [-1.0, 2.0]])
    p = ideal_interpolation(a, CfSplit((0,), (1,)))
    np.testing.assert_allclose(p.p, [[0.5], [1.0]])
    assert p.kind == "ideal"


def test_ideal_interpolation_diagonal_has_zero_weights():
    a = np.diag([1.0, 2.0, 3.0, 4.0])
    p = ideal_interpolation(a, cf_split_every_other(4)).p
    np.testing.assert_array_equal(p[[0, 2]], 0.0)
    np.testing.assert_array_equal(p[[1, 3]], np.eye(2))


def test_ideal_coarse_operator_is_spd():
    a = poisson_2d(2).toarray()
    ac = coarse_operator(a, ideal_interpolation(a, cf_split_every_other(4)))
    np.testing.assert_allclose(ac, ac.T, atol=1e-12)
    assert np.linalg.eigvalsh(ac)[0] > 0


def test_interpolation_validation():
    with pytest.raises(SingularMatrixError):
        Interpolation(np.array([[1.0, 2.0], [2.0, 4.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        Interpolation(np.ones((2, 3)))


def test_coarse_operator_singular():
    with pytest.raises(SingularMatrixError):
        coarse_operator(np.diag([1.0, 0.0]), np.array([[0.0], [1.0]]))


@pytest.mark.parametrize("fixture", ["poisson4", "block_adv8"])
def test_coarse_operator_of_optimal_interpolation(fixture, request):
    op, _, s = request.getfixturevalue(fixture)
    a = getattr(op, "block", op)
    for n_c in (2, 4, 8):
        ac = coarse_operator(a, optimal_interpolation(s, n_c))
        expected = np.diag(s.norm_signs[:n_c] * s.values[:n_c])
        np.testing.assert_allclose(ac, expected, atol=1e-9 * np.abs(s.values).max())


@pytest.mark.parametrize("fixture", ["poisson4", "block_adv8", "block_random8"])
def test_two_grid_error_structure(fixture, request):
    op, sm, s = request.getfixturevalue(fixture)
    a = getattr(op, "block", op).toarray()
    n = a.shape[0]
    for n_c in (2, n // 4, n // 2):
        p = optimal_interpolation(s, n_c)
        e = two_grid_error(a, sm.m_sym, p)
        # smooth modes are annihilated
        assert np.linalg.norm(e @ p.p) <= 1e-8 * np.linalg.norm(p.p)
        ev = np.linalg.eigvals(e)
        expected = np.concatenate([np.zeros(n_c), 1 - s.values[n_c:]])
        np.testing.assert_allclose(np.sort_complex(ev).real, np.sort(expected), atol=1e-8)
        rho = np.max(np.abs(ev))
        assert rho == pytest.approx(np.max(np.abs(1 - s.values[n_c:])), abs=1e-8)


def test_two_grid_error_depends_only_on_range(block_adv8, rng):
    bs, sm, s = block_adv8
    p = optimal_interpolation(s, 6).p
    g = rng.standard_normal((6, 6)) + 6 * np.eye(6)
    e1 = two_grid_error(bs.block, sm.m_sym, p)
    e2 = two_grid_error(bs.block, sm.m_sym, p @ g)
    assert np.linalg.norm(e1 - e2) <= 1e-9 * np.linalg.norm(e1)


def test_galerkin_coarse_is_symmetric(block_adv8, rng):
    bs, _, _ = block_adv8
    p = rng.standard_normal((bs.block.shape[0], 10))
    ac = coarse_operator(bs.block, p)
    np.testing.assert_allclose(ac, ac.T, atol=1e-12 * np.abs(ac).max())


def test_m_projection_idempotent(poisson4, rng):
    a, sm, s = poisson4
    p = rng.standard_normal((16, 5))
    pi = m_projection(p, sm.m_sym)
    np.testing.assert_allclose(pi @ pi, pi, atol=1e-10)
    np.testing.assert_allclose(pi @ p, p, atol=1e-10)


def test_kappa_examples(poisson4, rng):
    a, sm, s = poisson4
    a = a.toarray()
    v = rng.standard_normal(16)
    assert kappa(np.eye(16), v, a, sm.m_sym) == pytest.approx(0.0, abs=1e-12)
    n_c = 5
    p = optimal_interpolation(s, n_c)
    assert kappa(p, s.vectors[:, n_c], a, sm.m_sym) == pytest.approx(1 / s.values[n_c], rel=1e-9)
    # no vector beats the next eigenvector
    for _ in range(20):
        assert kappa(p, rng.standard_normal(16), a, sm.m_sym) <= 1 / s.values[n_c] * (1 + 1e-9)


def test_kappa_rejects_indefinite():
    with pytest.raises(NotSPDError):
        kappa(np.eye(2)[:, :1], np.ones(2), np.diag([1.0, -1.0]), np.eye(2))
    with pytest.raises(ValueError):
        kappa(np.eye(2)[:, :1], np.zeros(2), np.eye(2), np.eye(2))


def test_anorm_examples(poisson4):
    a = poisson4[0].toarray()
    assert anorm_of_operator(np.zeros((16, 16)), a) == 0.0
    assert anorm_of_operator(np.eye(16), a) == pytest.approx(1.0)
    with pytest.raises(NotSPDError):
        anorm_of_operator(np.eye(2), np.diag([1.0, -2.0]))


def test_anorm_identity_with_kaczmarz_m(poisson4):
    a, sm, s = poisson4
    a = a.toarray()
    for n_c in range(1, 16):
        p = optimal_interpolation(s, n_c)
        e = two_grid_error(a, sm.m, p)
        assert anorm_of_operator(e, a) ** 2 == pytest.approx(1 - s.values[n_c], abs=1e-10)
        ep = two_grid_error_prepost(a, sm.m, p)
        assert anorm_of_operator(ep, a) == pytest.approx(1 - s.values[n_c], abs=1e-10)


def test_prepost_with_full_coarse_space_is_zero():
    a = poisson_2d(2).toarray()
    e = two_grid_error_prepost(a, np.diag(np.diag(a)), np.eye(4))
    np.testing.assert_allclose(e, 0.0, atol=1e-12)


def test_optimal_interpolation_bounds(poisson4):
    s = poisson4[2]
    with pytest.raises(ValueError):
        optimal_interpolation(s, 0)
    with pytest.raises(ValueError):
        optimal_interpolation(s, 17)
    assert optimal_interpolation(s, 16).n_c == 16
