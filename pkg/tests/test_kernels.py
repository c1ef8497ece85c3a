"""Kernel assembly: shift/coupling containers and the Airy-type kernels."""

import numpy as np
import pytest

from ncairy import (
    CouplingMatrix,
    DivisionByZero,
    DomainError,
    OverflowRisk,
    ShiftVector,
    ai_arrays,
    contour_kernel,
    contour_symbol,
    gauss_legendre,
    matrix_airy_kernel,
    matrix_airy_sq_kernel,
    scalar_airy_kernel,
)

C_HERM = CouplingMatrix(np.array([[0.6, 0.2 + 0.1j], [0.2 - 0.1j, 0.5]]))


def _z_rule(m=200, cutoff=40.0):
    base = gauss_legendre(m)
    return 0.5 * cutoff * (base.nodes + 1.0), 0.5 * cutoff * base.weights


def test_shift_vector_split():
    s = ShiftVector(np.array([0.7, -0.2, 0.1]))
    assert s.S == pytest.approx(0.2)
    assert np.allclose(s.delta, [0.5, -0.4, -0.1])
    assert s.s - s.S == pytest.approx(s.delta)
    assert s.r == 3
    assert np.allclose(np.diag(s.diag()), s.s)


def test_coupling_matrix_flags():
    assert C_HERM.is_hermitean and not C_HERM.is_real
    c_real = CouplingMatrix(np.array([[0.5, 0.1], [0.3, 0.4]]))
    assert c_real.is_real and not c_real.is_hermitean
    neg = C_HERM.negated()
    assert np.allclose(neg.entries, -C_HERM.entries)


def test_sigma_max_cross_check():
    for c in (C_HERM, CouplingMatrix(np.array([[0.9, 0.5], [0.0, 0.3]]))):
        assert c.sigma_max == pytest.approx(c.sigma_max_crosscheck(), rel=1e-10)
    assert CouplingMatrix(np.array([[1.0]])).sigma_max == pytest.approx(1.0)


def test_matrix_airy_kernel_entries():
    s = ShiftVector(np.array([0.1, -0.3]))
    k = matrix_airy_kernel(0.4, 0.7, s, C_HERM)
    for j in range(2):
        for l in range(2):
            ai, _ = ai_arrays(np.asarray([0.4 + 0.7 + s.s[j] + s.s[l]]))
            assert k[j, l] == pytest.approx(C_HERM.entries[j, l] * ai[0], rel=1e-12)


def test_scalar_kernel_against_quadrature():
    z, wz = _z_rule()
    for a, b in ((0.0, 0.0), (0.5, -0.5), (-1.0, 2.0), (3.0, 3.5)):
        a1, _ = ai_arrays(a + z)
        a2, _ = ai_arrays(b + z)
        oracle = float(np.sum(wz * a1 * a2))
        assert float(scalar_airy_kernel(a, b)) == pytest.approx(oracle, abs=1e-8)


def test_scalar_kernel_diagonal_seam():
    # confluent branch must join the generic branch smoothly
    a = 0.3
    near = float(scalar_airy_kernel(a, a + 5e-7))
    far = float(scalar_airy_kernel(a, a + 5e-6))
    exact = float(scalar_airy_kernel(a, a))
    assert abs(near - exact) < abs(far - exact) + 1e-12
    assert near == pytest.approx(exact, rel=1e-6)


def test_sq_kernel_against_z_integral():
    s = ShiftVector(np.array([0.1, -0.4]))
    z, wz = _z_rule()
    for x, y in ((0.0, 0.5), (-1.0, 2.0), (1.3, 1.3)):
        direct = matrix_airy_sq_kernel(x, y, s, C_HERM)
        oracle = np.zeros((2, 2), dtype=complex)
        for j1 in range(2):
            for j2 in range(2):
                for k in range(2):
                    a1, _ = ai_arrays(x + s.s[j1] + z + s.s[k])
                    a2, _ = ai_arrays(z + s.s[k] + y + s.s[j2])
                    oracle[j1, j2] += (C_HERM.entries[j1, k] * C_HERM.entries[k, j2]
                                       * np.sum(wz * a1 * a2))
        assert np.max(np.abs(direct - oracle)) <= 1e-8


def test_sq_kernel_hermitean_transpose():
    s = ShiftVector(np.array([0.0, 0.25]))
    for x, y in ((0.3, -0.7), (1.1, 0.2)):
        a = matrix_airy_sq_kernel(x, y, s, C_HERM)
        b = matrix_airy_sq_kernel(y, x, s, C_HERM)
        assert np.max(np.abs(a - b.conj().T)) <= 1e-12


def test_contour_symbol_diagonal_phase():
    s = ShiftVector(np.array([0.0]))
    c = CouplingMatrix(np.array([[1.0]]))
    lam = 1.0j
    e1, e2 = contour_symbol(lam, s, c)
    # exp(i lam^3 / 6) at lam = i is exp(1/6)
    assert e2[0, 0] == pytest.approx(np.exp(1.0 / 6.0), rel=1e-12)
    assert e1[0, 0] == pytest.approx(-e2[0, 0] / (2.0j * np.pi), rel=1e-12)


def test_contour_kernel_guards():
    s = ShiftVector(np.array([0.0]))
    c = CouplingMatrix(np.array([[1.0]]))
    k = contour_kernel(1.0j, 1.0j, s, c)
    assert np.isfinite(k).all()
    with pytest.raises(DivisionByZero):
        contour_kernel(1.0j, -1.0j, s, c)
    with pytest.raises(OverflowRisk):
        contour_symbol(40.0j, s, c)


def test_shift_coupling_validation():
    with pytest.raises(DomainError):
        ShiftVector(np.array([np.nan]))
    with pytest.raises(DomainError):
        CouplingMatrix(np.array([[1.0, 2.0]]))
