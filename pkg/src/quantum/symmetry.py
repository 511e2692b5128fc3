"""Cyclic sectors, Dicke and Schur-Weyl bases, rank allocations and swap helpers."""
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, sqrt
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import null_space

from src.config import settings
from src.exceptions import DimensionError, InfeasibleCompressionError, LinearAlgebraError, SymmetryError
from src.models.frame import CodeFrame
from src.models.pauli import PauliOperator
from src.models.symmetry import (
    BlockDecomposition,
    RankAllocation,
    SectorBasis,
    SpinBlock,
    SymmetryGroup,
)
from src.quantum.codespace import make_frame
from src.quantum.numerics import hermitian_eig, orthonormality_error
from src.quantum.pauli import dense_matrix, single_site


def _shift_index(n: int, x: int) -> int:
    """Index of T|x> where T|b1...bn> = |bn b1 ... b(n-1)>."""
    return (x >> 1) | ((x & 1) << (n - 1))


def _permutation_matrix(images: np.ndarray) -> np.ndarray:
    dim = images.size
    matrix = np.zeros((dim, dim), dtype=complex)
    matrix[images, np.arange(dim)] = 1.0
    return matrix


@lru_cache(maxsize=None)
def shift_unitary(n: int) -> np.ndarray:
    """Cyclic shift T as a 2^n permutation matrix."""
    return _permutation_matrix(np.array([_shift_index(n, x) for x in range(2 ** n)]))


@lru_cache(maxsize=None)
def transposition_unitary(n: int, i: int, j: int) -> np.ndarray:
    """Swap of qubits i and j (1-based)."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise SymmetryError(f"Qubits ({i}, {j}) outside 1..{n}")
    bi, bj = n - i, n - j
    images = []
    for x in range(2 ** n):
        a, b = (x >> bi) & 1, (x >> bj) & 1
        if a != b:
            x ^= (1 << bi) | (1 << bj)
        images.append(x)
    return _permutation_matrix(np.array(images))


def group_generators(group: SymmetryGroup | str, n: int) -> list[np.ndarray]:
    """Generating unitaries: the shift for C_n; a transposition and the n-cycle for S_n."""
    group = SymmetryGroup(group)
    if group is SymmetryGroup.CYCLIC or n < 3:
        return [shift_unitary(n)]
    return [transposition_unitary(n, 1, 2), shift_unitary(n)]


def _orbit(n: int, x: int) -> list[int]:
    orbit = [x]
    y = _shift_index(n, x)
    while y != x:
        orbit.append(y)
        y = _shift_index(n, y)
    return orbit


@lru_cache(maxsize=None)
def _orbits(n: int) -> tuple[tuple[int, ...], ...]:
    seen: set[int] = set()
    orbits = []
    for x in range(2 ** n):
        if x in seen:
            continue
        orbit = _orbit(n, x)
        seen.update(orbit)
        orbits.append(tuple(orbit))
    return tuple(orbits)


@lru_cache(maxsize=None)
def _cyclic_sector(n: int, ell: int) -> SectorBasis:
    omega = np.exp(2j * np.pi / n)
    columns = []
    for orbit in _orbits(n):
        length = len(orbit)
        if (ell * length) % n:
            continue
        vec = np.zeros(2 ** n, dtype=complex)
        for r, x in enumerate(orbit):
            vec[x] = omega ** (-ell * r)
        columns.append(vec / sqrt(length))
    basis = np.column_stack(columns) if columns else np.zeros((2 ** n, 0), dtype=complex)
    basis.setflags(write=False)
    return SectorBasis(label=f"cyclic:{ell}", basis=basis)


def cyclic_sector_basis(n: int, ell: int) -> SectorBasis:
    """
    Isometry onto the omega^ell eigenspace of the cyclic shift.

    Built from Fourier-orbit states; an orbit of length L contributes to
    sector ell iff ell * L = 0 (mod n). Orbits are ordered by their smallest
    member.
    """
    if n < 1:
        raise SymmetryError(f"Qubit count must be positive, got {n}")
    if not 0 <= ell < n:
        raise SymmetryError(f"Sector index {ell} outside 0..{n - 1}")
    return _cyclic_sector(n, ell)


def all_cyclic_sectors(n: int) -> list[SectorBasis]:
    return [cyclic_sector_basis(n, ell) for ell in range(n)]


def dicke_state(n: int, weight: int) -> np.ndarray:
    vec = np.zeros(2 ** n, dtype=complex)
    for ones in combinations(range(n), weight):
        vec[sum(1 << (n - 1 - s) for s in ones)] = 1.0
    return vec / sqrt(comb(n, weight))


@lru_cache(maxsize=None)
def symmetric_subspace_basis(n: int) -> SectorBasis:
    """Normalized Dicke states |D_{n,w}>, w ascending."""
    if n < 1:
        raise SymmetryError(f"Qubit count must be positive, got {n}")
    basis = np.column_stack([dicke_state(n, w) for w in range(n + 1)])
    basis.setflags(write=False)
    return SectorBasis(label="dicke", basis=basis)


@lru_cache(maxsize=None)
def collective_spin(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Collective spin operators (J_x, J_y, J_z) = sum of single-site Paulis / 2."""
    ops = []
    for letter in "XYZ":
        ops.append(sum(dense_matrix(single_site(n, s, letter)) for s in range(1, n + 1)) / 2)
    return ops[0], ops[1], ops[2]


@lru_cache(maxsize=None)
def _schur_weyl(n: int) -> BlockDecomposition:
    jx, jy, _ = collective_spin(n)
    raising = jx + 1j * jy
    lowering = raising.conj().T
    weights = np.array([bin(x).count("1") for x in range(2 ** n)])

    blocks = []
    w = 0
    while 2 * w <= n:
        j = Fraction(n, 2) - w
        cols = np.flatnonzero(weights == w)
        if w == 0:
            kernel = np.eye(cols.size, dtype=complex)
        else:
            rows = np.flatnonzero(weights == w - 1)
            kernel = null_space(raising[np.ix_(rows, cols)])
        expected = comb(n, w) - (comb(n, w - 1) if w > 0 else 0)
        if kernel.shape[1] != expected:
            raise LinearAlgebraError(
                f"Highest-weight space for j={j} has dim {kernel.shape[1]}, expected {expected}"
            )

        copies = []
        for mu in range(kernel.shape[1]):
            vec = np.zeros(2 ** n, dtype=complex)
            vec[cols] = kernel[:, mu]
            ladder = [vec]
            m = j
            while m > -j:
                coeff = sqrt(float(j * (j + 1) - m * (m - 1)))
                ladder.append(lowering @ ladder[-1] / coeff)
                m -= 1
            copies.append(np.column_stack(ladder))
        basis = np.column_stack(copies)
        basis.setflags(write=False)
        blocks.append(SpinBlock(j=j, multiplicity=kernel.shape[1], basis=basis))
        w += 1
    return BlockDecomposition(n=n, blocks=tuple(blocks))


def schur_weyl_decomposition(n: int) -> BlockDecomposition:
    """
    Spin-block decomposition of n qubits under S_n x SU(2).

    Highest-weight vectors are the kernel of J_+ inside each J_z eigenspace;
    every copy is lowered with J_- so all copies of a block share the same
    |j, m> convention. Blocks run from j = n/2 down.
    """
    if not 2 <= n <= 8:
        raise SymmetryError(f"Schur-Weyl decomposition supports 2 <= n <= 8, got {n}")
    return _schur_weyl(n)


def _compositions(total: int, caps: Sequence[int], weights: Sequence[int]) -> list[tuple[int, ...]]:
    """All r with 0 <= r_i <= caps_i and sum(r_i * weights_i) == total, descending lexicographic."""
    if not caps:
        return [()] if total == 0 else []
    out = []
    for first in range(min(caps[0], total // weights[0]), -1, -1):
        for rest in _compositions(total - first * weights[0], caps[1:], weights[1:]):
            out.append((first,) + rest)
    return out


def enumerate_rank_allocations(group: SymmetryGroup | str, n: int, K: int) -> list[RankAllocation]:
    """
    All admissible rank allocations for a projector-level symmetric code.

    Cyclic: sum of k_ell equals K with k_ell <= dim H_ell.
    Permutation: sum of r_j * m_j equals K with r_j <= 2j + 1.
    """
    group = SymmetryGroup(group)
    if K < 1:
        return []
    if group is SymmetryGroup.CYCLIC:
        caps = [s.dim for s in all_cyclic_sectors(n)]
        weights = [1] * n
    else:
        blocks = schur_weyl_decomposition(n).blocks
        caps = [b.block_dim for b in blocks]
        weights = [b.multiplicity for b in blocks]
    return [RankAllocation(group=group, ranks=r) for r in _compositions(K, caps, weights)]


def allocation_bases(allocation: RankAllocation, n: int) -> list[tuple[np.ndarray, int, int]]:
    """Per active sector/block: (basis of all copies, block dim, copy count)."""
    out = []
    if allocation.group is SymmetryGroup.CYCLIC:
        for ell, rank in enumerate(allocation.ranks):
            if rank:
                sector = cyclic_sector_basis(n, ell)
                out.append((sector.basis, sector.dim, 1))
    else:
        for block, rank in zip(schur_weyl_decomposition(n).blocks, allocation.ranks):
            if rank:
                out.append((block.basis, block.block_dim, block.multiplicity))
    return out


def assemble_frame(allocation: RankAllocation, block_frames: Sequence[np.ndarray], n: int) -> CodeFrame:
    """
    Embed per-sector (or per-block) isometries into an ambient frame.

    Args:
        allocation: Rank allocation
        block_frames: One isometry per nonzero rank, in sector/block order
        n: Qubit count

    Returns:
        CodeFrame: Frame whose projector commutes with the group action
    """
    active = allocation_bases(allocation, n)
    ranks = [r for r in allocation.ranks if r]
    if len(block_frames) != len(active):
        raise SymmetryError(f"Expected {len(active)} block frames, got {len(block_frames)}")

    columns = []
    for (basis, width, copies), rank, frame in zip(active, ranks, block_frames):
        frame = np.asarray(frame, dtype=complex)
        if frame.shape != (width, rank):
            raise SymmetryError(f"Block frame shape {frame.shape} does not match ({width}, {rank})")
        if orthonormality_error(frame) > settings.orthonormality_tol:
            raise SymmetryError("Block frame is not an isometry")
        for mu in range(copies):
            columns.append(basis[:, mu * width:(mu + 1) * width] @ frame)
    return make_frame(n, np.column_stack(columns))


def symmetry_residual(frame: CodeFrame, generators: Sequence[np.ndarray]) -> float:
    """Sum over generators of ||P - U P U^H||_F^2."""
    proj = frame.projector
    total = 0.0
    for unitary in generators:
        u = np.asarray(unitary, dtype=complex)
        if u.shape != proj.shape:
            raise DimensionError(f"Generator shape {u.shape} does not match frame dimension {proj.shape}")
        if np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])) > 1e-10:
            raise SymmetryError("Symmetry generator is not unitary")
        total += float(np.linalg.norm(proj - u @ proj @ u.conj().T) ** 2)
    return total


def orbit_average(ops: Sequence[PauliOperator]) -> np.ndarray:
    """Dense average of a list of operators."""
    return sum(dense_matrix(op) for op in ops) / len(ops)


def restricted_operator(op: PauliOperator | np.ndarray, sector: SectorBasis) -> np.ndarray:
    """B^H F B for an operator (Pauli or dense) and a sector basis."""
    matrix = dense_matrix(op) if isinstance(op, PauliOperator) else np.asarray(op, dtype=complex)
    if matrix.shape[0] != sector.basis.shape[0]:
        raise DimensionError(f"Operator dimension {matrix.shape[0]} does not match sector rows {sector.basis.shape[0]}")
    basis = sector.basis
    return basis.conj().T @ matrix @ basis


def interlacing_window(op_restricted: np.ndarray, K: int) -> tuple[float, float]:
    """
    Cauchy bracket for a scalar rank-K compression.

    Any alpha with P E P = alpha P, rank P = K inside an N-dim invariant
    subspace, satisfies e_{K-1} <= alpha <= e_{N-K} (ascending eigenvalues).
    """
    values = hermitian_eig(op_restricted).values
    size = values.size
    if K < 1 or K >= size:
        raise SymmetryError(f"Rank {K} must satisfy 1 <= K < {size}")
    return float(values[K - 1]), float(values[size - K])


def interlacing_forced_scalar(op_restricted: np.ndarray, K: int, tol: float = 1e-9) -> Optional[float]:
    """
    Scalar pinned by interlacing when the subspace has codimension one.

    Returns None when nothing is forced (dim > K+1, or a free window).

    Raises:
        InfeasibleCompressionError: dim = K+1 and the window is empty, so no
            rank-K code compresses the operator to a scalar
    """
    size = np.asarray(op_restricted).shape[0]
    if K >= size:
        raise SymmetryError(f"Rank {K} must be smaller than dimension {size}")
    if size > K + 1:
        return None
    low, high = interlacing_window(op_restricted, K)
    if low - high > tol:
        raise InfeasibleCompressionError(
            f"Interlacing window [{low:.6g}, {high:.6g}] is empty for rank {K} in dimension {size}"
        )
    if high - low > tol:
        return None
    return 0.5 * (low + high)


def _isotropic_error(shifted: np.ndarray, basis: np.ndarray) -> float:
    return float(np.max(np.abs(basis.conj().T @ shifted @ basis), initial=0.0))


def _normal_candidate(shifted: np.ndarray, normals: list[np.ndarray], planes: list[tuple], tol: float) -> None:
    values, vectors = np.linalg.eigh(shifted)
    neg, pos = -float(values[0]), float(values[-1])
    if neg <= tol:
        normals.append(vectors[:, -1])
    elif pos <= tol:
        normals.append(vectors[:, 0])
    else:
        planes.append((vectors[:, 0], vectors[:, -1], neg, pos))


def _plane_normal(planes: list[tuple], tol: float) -> Optional[np.ndarray]:
    size = planes[0][0].size
    stacked = np.vstack([
        np.eye(size) - np.outer(u0, u0.conj()) - np.outer(u1, u1.conj()) for u0, u1, _, _ in planes
    ])
    common = null_space(stacked, rcond=tol)
    if common.shape[1] == 0:
        return None
    if common.shape[1] == 1:
        return common[:, 0]
    # all planes coincide: each constraint is b|<u0,xi>|^2 = a|<u1,xi>|^2, a plane cut of the Bloch sphere
    paulis = (np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]]))
    rows, rhs = [], []
    for u0, u1, a, b in planes:
        form = common.conj().T @ (b * np.outer(u0, u0.conj()) - a * np.outer(u1, u1.conj())) @ common
        rows.append([np.real(np.trace(form @ s)) for s in paulis])
        rhs.append(-np.real(np.trace(form)))
    rows, rhs = np.asarray(rows), np.asarray(rhs)
    point, *_ = np.linalg.lstsq(rows, rhs, rcond=None)
    if np.linalg.norm(rows @ point - rhs) > tol ** 0.5:
        return None
    radius = float(np.linalg.norm(point))
    if radius > 1.0 + tol ** 0.5:
        return None
    free = null_space(rows, rcond=tol)
    if free.shape[1] and radius < 1.0:
        point = point + np.sqrt(max(1.0 - radius ** 2, 0.0)) * free[:, 0]
    point = point / max(np.linalg.norm(point), 1e-300)
    state = 0.5 * (np.eye(2) + sum(r * s for r, s in zip(point, paulis)))
    return common @ np.linalg.eigh(state)[1][:, -1]


def forced_compression_witness(
    restricted_ops: Sequence[np.ndarray],
    scalars: Sequence[float],
    K: int,
    tol: float = 1e-9,
) -> Optional[np.ndarray]:
    """
    Common rank-K subspace on which every operator compresses to its forced scalar.

    In a (K+1)-dimensional subspace each shifted operator F - alpha has at
    most one negative and one positive eigenvalue. A code is the orthogonal
    complement of a normal xi, and xi must be an eigenvector of a semidefinite
    shift or lie on the plane of the extreme eigenvectors of an indefinite one
    with b|<u0,xi>|^2 = a|<u1,xi>|^2.

    Args:
        restricted_ops: Operators restricted to the invariant subspace
        scalars: Forced scalar of each operator
        K: Code dimension; the subspace must have dimension K+1

    Returns:
        Orthonormal (K+1) x K code basis in subspace coordinates, or None when
        the forced eigenspaces are incompatible (no scalar code exists)
    """
    if len(restricted_ops) != len(scalars):
        raise DimensionError("Need one forced scalar per operator")
    size = K + 1
    shifted = []
    for op, alpha in zip(restricted_ops, scalars):
        op = np.asarray(op, dtype=complex)
        if op.shape != (size, size):
            raise DimensionError(f"Restricted operator shape {op.shape} is not ({size}, {size})")
        shift = 0.5 * (op + op.conj().T) - alpha * np.eye(size)
        if np.max(np.abs(shift)) > tol:
            shifted.append(shift)

    normals, planes = [], []
    for shift in shifted:
        _normal_candidate(shift, normals, planes, tol)
    if normals:
        normal = normals[0]
    elif planes:
        normal = _plane_normal(planes, tol)
    else:
        normal = np.eye(size, dtype=complex)[:, 0]
    if normal is None:
        return None

    code = null_space(np.asarray(normal).conj()[None, :])
    if any(_isotropic_error(shift, code) > tol ** 0.5 for shift in shifted):
        return None
    return code


def _sector_rank(projector: np.ndarray, sector: SectorBasis) -> float:
    return float(np.real(np.trace(sector.basis.conj().T @ projector @ sector.basis)))


def swap_complement_projector(frame: CodeFrame) -> CodeFrame:
    """
    Map a two-qubit (1,1) swap-symmetric code to the rank-2 code Pi_0 - |xi><xi|.

    xi is the symmetric column of the input code.
    """
    if frame.n != 2 or frame.K != 2:
        raise SymmetryError("Swap complement needs a rank-2 two-qubit frame")
    sym = cyclic_sector_basis(2, 0)
    anti = cyclic_sector_basis(2, 1)
    proj = frame.projector
    k0, k1 = _sector_rank(proj, sym), _sector_rank(proj, anti)
    if abs(k0 - 1) > 1e-8 or abs(k1 - 1) > 1e-8 or symmetry_residual(frame, [shift_unitary(2)]) > 1e-10:
        raise SymmetryError(f"Frame is not of (1,1) swap type (sector ranks {k0:.3f}, {k1:.3f})")

    block = sym.basis.conj().T @ proj @ sym.basis
    xi = hermitian_eig(block).vectors[:, -1]
    complement = null_space(xi.conj()[None, :])
    return make_frame(2, sym.basis @ complement)
