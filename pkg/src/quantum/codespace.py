"""Code frames, Knill-Laflamme compressions, signatures and stabilizer codes."""
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from src.config import settings
from src.exceptions import DimensionError, LinearAlgebraError, StabilizerError
from src.models.frame import CodeFrame, CompressionReport, DetectionReport, SignatureVector
from src.models.pauli import ErrorFamily, PauliOperator
from src.quantum.numerics import hermitian_eig, orthonormality_error, polar_orthonormalize
from src.quantum.pauli import commutes, dense_matrix, multiply, parse_pauli


def make_frame(n: int, psi: np.ndarray) -> CodeFrame:
    """Wrap an isometry as a CodeFrame, checking shape and orthonormality."""
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 2 or psi.shape[0] != 2 ** n:
        raise DimensionError(f"Frame for {n} qubits needs {2 ** n} rows, got shape {psi.shape}")
    if orthonormality_error(psi) > settings.orthonormality_tol:
        raise LinearAlgebraError("Frame columns are not orthonormal")
    return CodeFrame(n=n, psi=psi)


def frame_from_vectors(n: int, vectors: Sequence[np.ndarray]) -> CodeFrame:
    """Frame spanning explicit codewords, orthonormalized by the polar map."""
    theta = np.column_stack([np.asarray(v, dtype=complex) for v in vectors])
    return make_frame(n, polar_orthonormalize(theta))


def basis_state(n: int, bits: str) -> np.ndarray:
    """Computational basis vector |b_1 ... b_n> with qubit 1 leftmost."""
    if len(bits) != n or any(ch not in "01" for ch in bits):
        raise DimensionError(f"Invalid {n}-qubit basis label {bits!r}")
    vec = np.zeros(2 ** n, dtype=complex)
    vec[int(bits, 2)] = 1.0
    return vec


def ket(n: int, terms: dict[str, complex]) -> np.ndarray:
    """Unnormalized superposition from a {bitstring: amplitude} map."""
    vec = np.zeros(2 ** n, dtype=complex)
    for bits, amplitude in terms.items():
        vec += amplitude * basis_state(n, bits)
    return vec


def _check_family(frame: CodeFrame, family: ErrorFamily) -> None:
    if frame.n != family.n:
        raise DimensionError(f"Frame has {frame.n} qubits, family has {family.n}")


def compression_matrix(frame: CodeFrame, op: PauliOperator) -> np.ndarray:
    """M_F = Psi^H F Psi."""
    if frame.n != op.n:
        raise DimensionError(f"Frame has {frame.n} qubits, operator {op.label} has {op.n}")
    return frame.psi.conj().T @ dense_matrix(op) @ frame.psi


def compression_report(frame: CodeFrame, family: ErrorFamily) -> CompressionReport:
    """Compressions, scalar parts and per-operator residuals ||M_F - kappa I||_F^2."""
    _check_family(frame, family)
    K = frame.K
    if len(family) == 0:
        return CompressionReport(np.zeros((0, K, K), dtype=complex), np.zeros(0), np.zeros(0))
    psi = frame.psi
    matrices = psi.conj().T[None, :, :] @ family.dense_stack @ psi[None, :, :]
    traces = np.trace(matrices, axis1=1, axis2=2)
    kappa = traces.real / K
    offset = matrices - kappa[:, None, None] * np.eye(K)[None, :, :]
    residuals = np.sum(np.abs(offset) ** 2, axis=(1, 2))
    return CompressionReport(matrices=matrices, kappa=kappa, residuals=residuals)


def kl_residual(frame: CodeFrame, family: ErrorFamily) -> float:
    """Knill-Laflamme feasibility loss summed over the family."""
    return compression_report(frame, family).kl_residual


def signature(frame: CodeFrame, tuple_: ErrorFamily) -> SignatureVector:
    """Signature vector lambda_a = Tr(Psi^H E_a Psi)/K and its norm."""
    _check_family(frame, tuple_)
    if len(tuple_) == 0:
        return SignatureVector(lambdas=[], lambda_star=0.0)
    psi = frame.psi
    traces = np.einsum("ij,ajk,ki->a", psi.conj().T, tuple_.dense_stack, psi)
    if np.max(np.abs(traces.imag)) / frame.K > 1e-10:
        raise LinearAlgebraError("Signature traces have a non-negligible imaginary part")
    return SignatureVector.from_values(traces.real / frame.K)


def validate(
    frame: CodeFrame,
    family: ErrorFamily,
    eps_kl: Optional[float] = None,
    tuple_: Optional[ErrorFamily] = None,
) -> DetectionReport:
    """
    Validate a frame by direct evaluation of the detection residual.

    Args:
        frame: Code frame
        family: Detectable set
        eps_kl: Acceptance threshold on the KL residual
        tuple_: Signature tuple, defaults to the family

    Returns:
        DetectionReport: Acceptance flag, residuals and signature
    """
    eps = settings.eps_kl if eps_kl is None else eps_kl
    if eps <= 0:
        raise ValueError("eps_kl must be positive")
    tuple_ = family if tuple_ is None else tuple_
    residual = kl_residual(frame, family)
    ortho = orthonormality_error(frame.psi)
    sig = signature(frame, tuple_)
    return DetectionReport(
        accepted=residual <= eps and ortho <= settings.orthonormality_tol,
        kl_residual=residual,
        orthonormality_error=ortho,
        eps_kl=eps,
        signature=sig,
        labels=tuple_.labels,
    )


def stabilizer_group(generators: Sequence[PauliOperator]) -> list[PauliOperator]:
    """
    Enumerate the group generated by commuting Hermitian Paulis.

    Raises:
        StabilizerError: if generators anticommute or the group contains -I
    """
    if not generators:
        return []
    n = generators[0].n
    for a, b in combinations(generators, 2):
        if a.n != b.n:
            raise StabilizerError("Generators act on different qubit counts")
        if not commutes(a, b):
            raise StabilizerError(f"Generators {a.label} and {b.label} anticommute")

    elements = {parse_pauli("I" * n).key: parse_pauli("I" * n)}
    frontier = list(elements.values())
    while frontier:
        nxt = []
        for element in frontier:
            for gen in generators:
                prod = multiply(element, gen)
                if prod.is_identity and prod.sign < 0:
                    raise StabilizerError("Stabilizer group contains -I")
                if prod.key not in elements:
                    elements[prod.key] = prod
                    nxt.append(prod)
        frontier = nxt
    return sorted(elements.values(), key=lambda op: (op.weight, op.x_bits, op.z_bits))


def stabilizer_projector(generators: Sequence[PauliOperator], n: Optional[int] = None) -> CodeFrame:
    """
    Frame of the common +1 eigenspace of a stabilizer group.

    The group average projector is diagonalized and eigenvalues above 0.5
    are kept.
    """
    if not generators:
        if n is None:
            raise StabilizerError("Qubit count required for an empty generator list")
        return make_frame(n, np.eye(2 ** n, dtype=complex))
    group = stabilizer_group(generators)
    n = generators[0].n
    dim = 2 ** n
    proj = sum(dense_matrix(op) for op in group) / len(group)
    eig = hermitian_eig(proj, max_dim=max(dim, settings.max_matrix_dim))
    keep = eig.values > 0.5
    if not np.any(keep):
        raise StabilizerError("Stabilizer group has an empty code space")
    return make_frame(n, eig.vectors[:, keep][:, ::-1])
