"""Matrix Hastings-McLeod solver: Picard tail, RK4 continuation, Lax pair."""

import math

import numpy as np
import pytest

from ncairy import (
    CouplingMatrix,
    PoleEncountered,
    ai_arrays,
    airy_eval,
    alpha1,
    beta2,
    hm_solve,
    hm_tail_picard,
    lax_matrices,
    ncp2_residual,
    zero_curvature_residual_p2,
)
from ncairy.ncp2 import _rk4_step

C1 = CouplingMatrix(np.array([[1.0]]))
C2 = CouplingMatrix(np.array([[0.6, 0.2 + 0.1j], [0.2 - 0.1j, 0.5]]))
D2 = [0.0, 0.3]


@pytest.fixture(scope="module")
def grid1():
    return hm_solve(C1, [0.0], S_min=-1.5)


@pytest.fixture(scope="module")
def grid2():
    return hm_solve(C2, D2, S_min=-1.5)


def test_scalar_known_value(grid1):
    # the scalar Hastings-McLeod solution at the origin
    assert float(np.real(grid1.beta1_at(0.0)[0, 0])) == pytest.approx(
        -0.36706155154620285, abs=1e-9)


def test_deep_tail_matches_airy(grid1):
    # far to the right the solution collapses onto its Airy seed
    assert complex(grid1.beta1_at(4.0)[0, 0]) == pytest.approx(
        -airy_eval(8.0).ai, abs=1e-12)


def test_asymptotic_matching(grid2):
    s_val = 5.0
    b = grid2.beta1_at(s_val)
    sj = s_val + np.asarray(D2)
    target = -C2.entries * ai_arrays(sj[:, None] + sj[None, :])[0]
    m = float(np.max(np.abs(D2)))
    bound = 10.0 * math.sqrt(s_val) * math.exp(-(4.0 / 3.0) * (2 * s_val - 2 * m) ** 1.5)
    assert float(np.max(np.abs(b - target))) <= bound


def test_ode_residual_everywhere(grid1, grid2):
    for grid in (grid1, grid2):
        for s_val in np.linspace(-1.4, 6.0, 16):
            assert ncp2_residual(grid, float(s_val)) <= 1e-6


def test_residual_fourth_order_decay():
    res_h = []
    for h in (1e-2, 5e-3):
        grid = hm_solve(C1, [0.0], S_min=-1.0, h=h, cached=False)
        res_h.append(max(ncp2_residual(grid, s) for s in (-0.5, 0.0, 1.0)))
    ratio = res_h[0] / res_h[1]
    assert ratio > 8.0  # O(h^4) halving gives ~16


def test_parity_odd_in_coupling():
    g_plus = hm_solve(CouplingMatrix(np.array([[0.6, 0.2], [0.2, 0.5]])), D2, S_min=-0.5)
    g_minus = hm_solve(CouplingMatrix(np.array([[-0.6, -0.2], [-0.2, -0.5]])), D2, S_min=-0.5)
    assert float(np.max(np.abs(g_plus.beta1 + g_minus.beta1))) <= 1e-12


def test_hermiticity(grid2):
    for s_val in (-0.5, 0.0, 1.0, 3.0):
        b = grid2.beta1_at(s_val)
        assert float(np.max(np.abs(b - b.conj().T))) <= 1e-12


def test_picard_ode_seam():
    t0 = hm_tail_picard(C1, [0.0], 2.0)
    t1 = hm_tail_picard(C1, [0.0], 3.0)
    b = t1.beta1_at(np.asarray([3.0]))[0]
    db = t1.dbeta1_at(np.asarray([3.0]))[0]
    h = 1e-3
    s_cur = 3.0
    for _ in range(1000):
        b, db = _rk4_step(s_cur, b, db, -h, np.array([0.0]))
        s_cur -= h
    ref = t0.beta1_at(np.asarray([2.0]))[0]
    assert float(np.max(np.abs(b - ref))) <= 1e-9


def test_zero_coupling_is_zero():
    grid = hm_solve(CouplingMatrix(np.array([[0.0]])), [0.0], S_min=-1.0)
    assert float(np.max(np.abs(grid.beta1))) == 0.0


def test_supercritical_pole_detection():
    with pytest.raises(PoleEncountered) as exc:
        hm_solve(CouplingMatrix(np.array([[1.5]])), [0.0], S_min=-3.0)
    pole = exc.value.pole_at
    assert -3.0 < pole < 0.0
    # the partial grid remains usable to the right of the pole
    grid = exc.value.grid
    assert grid.S_values[0] > pole
    assert np.isfinite(grid.beta1).all()


def test_alpha1_antiderivative(grid1):
    # D alpha1 = -2i beta1^2, checked by central differences
    h = 1e-3
    a = [alpha1(grid1, 0.5 + k * h) for k in (-2, -1, 1, 2)]
    fd = (a[0] - 8 * a[1] + 8 * a[2] - a[3]) / (12 * h)
    b = grid1.beta1_at(0.5)
    assert np.max(np.abs(fd - (-2.0j) * b @ b)) <= 1e-8


def test_beta2_consistency(grid1):
    b = grid1.beta1_at(0.5)
    db = grid1.dbeta1_at(0.5)
    a1 = alpha1(grid1, 0.5)
    expect = -0.5j * db - 1.0j * b @ a1
    assert np.max(np.abs(beta2(grid1, 0.5) - expect)) <= 1e-12


def test_zero_curvature(grid1, grid2):
    lams = (1.0, 1.0j, -2.0, 0.5 + 0.5j)
    assert zero_curvature_residual_p2(grid1, 0.5, lams) <= 1e-8
    assert zero_curvature_residual_p2(grid2, 0.5, lams) <= 1e-7


def test_lax_matrix_shapes(grid2):
    pair = lax_matrices(grid2, 0.5)
    a = pair.a_at(1.0 + 0.5j)
    ud = pair.ud_at(1.0 + 0.5j)
    assert a.shape == (4, 4) and ud.shape == (4, 4)
    assert np.isfinite(a).all() and np.isfinite(ud).all()


def test_interpolation_consistency(grid1):
    # evaluation off the grid agrees with the stored nodes nearby
    i = grid1.index_of(0.25)
    s_node = float(grid1.S_values[i])
    assert np.max(np.abs(grid1.beta1_at(s_node) - grid1.beta1[i])) <= 1e-13
