"""Test dense Hermitian linear algebra."""
import numpy as np
import pytest

from src.exceptions import LinearAlgebraError
from src.quantum.numerics import (
    complex_gaussian,
    hermitian_eig,
    inv_sqrt_psd,
    orthonormality_error,
    polar_orthonormalize,
    projector_distance,
    random_isometry,
)


def _random_hermitian(rng, dim):
    a = complex_gaussian(rng, (dim, dim))
    return a + a.conj().T


def test_eig_diagonal():
    eig = hermitian_eig(np.diag([1.0, -1.0]))
    assert np.allclose(eig.values, [-1.0, 1.0])


def test_eig_reconstructs(rng):
    m = _random_hermitian(rng, 8)
    eig = hermitian_eig(m)
    assert np.all(np.diff(eig.values) >= 0)
    assert np.allclose(eig.vectors @ np.diag(eig.values) @ eig.vectors.conj().T, m)
    assert orthonormality_error(eig.vectors) < 1e-12


def test_eig_rejects_non_square():
    with pytest.raises(LinearAlgebraError):
        hermitian_eig(np.zeros((2, 3)))


def test_eig_rejects_non_hermitian():
    with pytest.raises(LinearAlgebraError):
        hermitian_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eig_dimension_cap():
    with pytest.raises(LinearAlgebraError):
        hermitian_eig(np.eye(3), max_dim=2)


def test_inv_sqrt_identity_and_diagonal():
    assert np.allclose(inv_sqrt_psd(np.eye(3)), np.eye(3))
    assert np.allclose(inv_sqrt_psd(np.diag([4.0, 1.0])), np.diag([0.5, 1.0]))


def test_inv_sqrt_random_psd(rng):
    a = complex_gaussian(rng, (6, 6))
    m = a @ a.conj().T + 0.1 * np.eye(6)
    r = inv_sqrt_psd(m)
    assert np.allclose(r @ m @ r, np.eye(6), atol=1e-10)


def test_inv_sqrt_rejects_singular():
    with pytest.raises(LinearAlgebraError):
        inv_sqrt_psd(np.diag([1.0, 0.0]))


def test_polar_fixed_point(rng):
    psi = random_isometry(8, 3, rng)
    assert np.allclose(polar_orthonormalize(psi), psi)


def test_polar_scale_invariance(rng):
    psi = random_isometry(8, 2, rng)
    assert np.allclose(polar_orthonormalize(3.0 * psi), psi)


def test_polar_random_tall(rng):
    theta = complex_gaussian(rng, (32, 2))
    psi = polar_orthonormalize(theta)
    assert orthonormality_error(psi) < 1e-10
    # same column space
    proj = theta @ np.linalg.inv(theta.conj().T @ theta) @ theta.conj().T
    assert np.allclose(psi @ psi.conj().T, proj)


def test_polar_rejects_rank_deficient():
    theta = np.zeros((4, 2), dtype=complex)
    theta[0, 0] = theta[0, 1] = 1.0
    with pytest.raises(LinearAlgebraError):
        polar_orthonormalize(theta)


def test_polar_rejects_wide():
    with pytest.raises(LinearAlgebraError):
        polar_orthonormalize(np.ones((2, 3)))


def test_projector_distance_right_unitary_invariant(rng):
    psi = random_isometry(6, 2, rng)
    unitary = random_isometry(2, 2, rng)
    assert projector_distance(psi, psi @ unitary) < 1e-12
    assert projector_distance(psi, random_isometry(6, 2, rng)) > 1e-3


def test_random_isometry_reproducible():
    a = random_isometry(5, 2, np.random.Generator(np.random.Philox(3)))
    b = random_isometry(5, 2, np.random.Generator(np.random.Philox(3)))
    assert np.array_equal(a, b)
