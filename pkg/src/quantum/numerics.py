"""Dense complex Hermitian linear algebra for small matrices."""
from typing import NamedTuple, Optional

import numpy as np

from src.config import settings
from src.exceptions import LinearAlgebraError


class HermitianEig(NamedTuple):
    """Ascending eigenvalues with column eigenvectors."""
    values: np.ndarray
    vectors: np.ndarray


def _as_square(matrix: np.ndarray) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise LinearAlgebraError(f"Expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise LinearAlgebraError("Matrix has non-finite entries")
    return m


def hermitian_error(matrix: np.ndarray) -> float:
    """Relative Hermiticity defect ||M - M^H||_F / max(1, ||M||_F)."""
    m = np.asarray(matrix)
    return float(np.linalg.norm(m - m.conj().T) / max(1.0, np.linalg.norm(m)))


def hermitian_eig(matrix: np.ndarray, max_dim: Optional[int] = None) -> HermitianEig:
    """
    Eigendecomposition of a Hermitian matrix.

    Args:
        matrix: Square Hermitian matrix
        max_dim: Dimension cap, defaults to settings.max_matrix_dim

    Returns:
        HermitianEig: Ascending eigenvalues and a unitary of eigenvectors
    """
    m = _as_square(matrix)
    cap = settings.max_matrix_dim if max_dim is None else max_dim
    if m.shape[0] > cap:
        raise LinearAlgebraError(f"Dimension {m.shape[0]} exceeds cap {cap}")
    if hermitian_error(m) > settings.hermitian_tol:
        raise LinearAlgebraError("Matrix is not Hermitian within tolerance")

    try:
        values, vectors = np.linalg.eigh(0.5 * (m + m.conj().T))
    except np.linalg.LinAlgError as exc:
        raise LinearAlgebraError(f"Eigendecomposition did not converge: {exc}") from exc
    return HermitianEig(values=values, vectors=vectors)


def inv_sqrt_psd(matrix: np.ndarray, eps_psd: Optional[float] = None) -> np.ndarray:
    """Inverse square root of a positive definite Hermitian matrix."""
    eps = settings.eps_psd if eps_psd is None else eps_psd
    eig = hermitian_eig(matrix)
    if eig.values[0] < eps or eig.values[0] <= 0.0:
        raise LinearAlgebraError(
            f"Near-singular matrix: smallest eigenvalue {eig.values[0]:.3e} < {eps:.1e}"
        )
    scale = 1.0 / np.sqrt(eig.values)
    return (eig.vectors * scale) @ eig.vectors.conj().T


def polar_orthonormalize(theta: np.ndarray, min_singular: Optional[float] = None) -> np.ndarray:
    """
    Polar map theta -> theta (theta^H theta)^{-1/2}.

    The result has orthonormal columns and spans the column space of theta.
    """
    t = np.asarray(theta, dtype=complex)
    if t.ndim != 2 or t.shape[1] > t.shape[0]:
        raise LinearAlgebraError(f"Expected a tall D x K matrix, got shape {t.shape}")
    floor = settings.min_singular_value if min_singular is None else min_singular
    singular = np.linalg.svd(t, compute_uv=False)
    if singular.size and singular[-1] < floor * max(1.0, singular[0]):
        raise LinearAlgebraError(f"Rank-deficient frame: sigma_min = {singular[-1]:.3e}")
    # rank was checked relative to sigma_max, so the Gram floor is only positivity
    return t @ inv_sqrt_psd(t.conj().T @ t, eps_psd=0.0)


def orthonormality_error(psi: np.ndarray) -> float:
    """||Psi^H Psi - I||_F."""
    k = psi.shape[1]
    return float(np.linalg.norm(psi.conj().T @ psi - np.eye(k)))


def projector(psi: np.ndarray) -> np.ndarray:
    return psi @ psi.conj().T


def projector_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius distance between the projectors of two frames."""
    return float(np.linalg.norm(projector(a) - projector(b)))


def complex_gaussian(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    """Standard complex Gaussian entries (E|z|^2 = 1)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_isometry(dim: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-like random D x K isometry via the polar map of a Gaussian matrix."""
    return polar_orthonormalize(complex_gaussian(rng, (dim, rank)))
