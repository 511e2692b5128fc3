"""Branch routing: search modes to reduced search spaces."""
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from src.exceptions import DimensionError
from src.models.frame import CodeFrame
from src.models.search import Branch, OptimizerConfig, Problem, SearchMode
from src.models.symmetry import RankAllocation, SymmetryGroup
from src.quantum.codespace import make_frame
from src.quantum.numerics import complex_gaussian, polar_orthonormalize
from src.quantum.symmetry import (
    allocation_bases,
    cyclic_sector_basis,
    enumerate_rank_allocations,
    group_generators,
    symmetric_subspace_basis,
)


@dataclass(frozen=True)
class ParameterBlock:
    """
    One free complex block of the reduced frame.

    The block (rows x cols) is placed ``copies`` times along the diagonal
    starting at (row_offset, col_offset); tied copies share parameters.
    """

    rows: int
    cols: int
    row_offset: int = 0
    col_offset: int = 0
    copies: int = 1

    @property
    def size(self) -> int:
        return self.rows * self.cols

    def placements(self):
        for mu in range(self.copies):
            r0 = self.row_offset + mu * self.rows
            c0 = self.col_offset + mu * self.cols
            yield slice(r0, r0 + self.rows), slice(c0, c0 + self.cols)


@dataclass(eq=False)
class BranchSpace:
    """
    Reduced search space of one branch.

    The ambient frame is basis @ polar(theta), where theta is assembled from
    the parameter blocks. Operators are stored pre-reduced (B^H F B).
    """

    branch: Branch
    n: int
    K: int
    basis: Optional[np.ndarray]
    blocks: tuple[ParameterBlock, ...]
    family_ops: np.ndarray
    tuple_ops: np.ndarray
    penalty_generators: tuple[np.ndarray, ...] = ()
    check_generators: tuple[np.ndarray, ...] = ()
    allocation: Optional[RankAllocation] = None

    @property
    def dim(self) -> int:
        """Reduced dimension d."""
        return 2 ** self.n if self.basis is None else self.basis.shape[1]

    @property
    def n_params(self) -> int:
        return 2 * sum(b.size for b in self.blocks)

    def theta(self, blocks: Sequence[np.ndarray]) -> np.ndarray:
        """Assemble the reduced d x K frame from parameter blocks."""
        theta = np.zeros((self.dim, self.K), dtype=complex)
        for spec, value in zip(self.blocks, blocks):
            for rows, cols in spec.placements():
                theta[rows, cols] = value
        return theta

    def block_gradients(self, grad_theta: np.ndarray) -> list[np.ndarray]:
        """Chain rule through the tied placements."""
        out = []
        for spec in self.blocks:
            g = np.zeros((spec.rows, spec.cols), dtype=complex)
            for rows, cols in spec.placements():
                g += grad_theta[rows, cols]
            out.append(g)
        return out

    def pack(self, blocks: Sequence[np.ndarray]) -> np.ndarray:
        """Real vector (Re, Im) per block, blocks in order."""
        parts = []
        for value in blocks:
            value = np.asarray(value, dtype=complex)
            parts.append(value.real.ravel())
            parts.append(value.imag.ravel())
        return np.concatenate(parts) if parts else np.zeros(0)

    def unpack(self, x: np.ndarray) -> list[np.ndarray]:
        x = np.asarray(x, dtype=float)
        if x.size != self.n_params:
            raise DimensionError(f"Expected {self.n_params} real parameters, got {x.size}")
        out, offset = [], 0
        for spec in self.blocks:
            re = x[offset:offset + spec.size].reshape(spec.rows, spec.cols)
            offset += spec.size
            im = x[offset:offset + spec.size].reshape(spec.rows, spec.cols)
            offset += spec.size
            out.append(re + 1j * im)
        return out

    def random_blocks(self, rng: np.random.Generator) -> list[np.ndarray]:
        return [complex_gaussian(rng, (spec.rows, spec.cols)) for spec in self.blocks]

    def normalize(self, blocks: Sequence[np.ndarray]) -> list[np.ndarray]:
        """Polar map applied block by block."""
        return [polar_orthonormalize(b) for b in blocks]

    def ambient(self, reduced: np.ndarray) -> np.ndarray:
        return reduced if self.basis is None else self.basis @ reduced

    def frame(self, blocks: Sequence[np.ndarray]) -> CodeFrame:
        """Assembled ambient frame for a parameter point."""
        return make_frame(self.n, self.ambient(polar_orthonormalize(self.theta(blocks))))

    def blocks_from_frame(self, frame: CodeFrame) -> list[np.ndarray]:
        """Parameter blocks reproducing ``frame`` (first copy of each tied block)."""
        reduced = frame.psi if self.basis is None else self.basis.conj().T @ frame.psi
        out = []
        for spec in self.blocks:
            rows, cols = next(spec.placements())
            out.append(reduced[rows, cols].copy())
        return out


def _reduce(stack: np.ndarray, basis: Optional[np.ndarray]) -> np.ndarray:
    if basis is None or stack.size == 0:
        return stack
    return np.einsum("ji,ajk,kl->ail", basis.conj(), stack, basis)


class BranchRouter:
    """Service for routing a problem to the branches of its search mode."""

    def __init__(self):
        """Initialize branch router."""
        self.routing_rules: Dict[SearchMode, Callable[[Problem, OptimizerConfig], List[Branch]]] = {
            SearchMode.UNRESTRICTED: self._route_unrestricted,
            SearchMode.CYCLIC_BASIS: self._route_cyclic_basis,
            SearchMode.CYCLIC_PROJECTOR: self._route_projector,
            SearchMode.PI_BASIS: self._route_pi_basis,
            SearchMode.PI_PROJECTOR: self._route_projector,
            SearchMode.SOFT_PENALTY: self._route_unrestricted,
        }
        self.space_rules = {
            SearchMode.UNRESTRICTED: self._space_unrestricted,
            SearchMode.CYCLIC_BASIS: self._space_cyclic_basis,
            SearchMode.CYCLIC_PROJECTOR: self._space_projector,
            SearchMode.PI_BASIS: self._space_pi_basis,
            SearchMode.PI_PROJECTOR: self._space_projector,
            SearchMode.SOFT_PENALTY: self._space_soft_penalty,
        }

    def route(self, problem: Problem, config: Optional[OptimizerConfig] = None) -> List[Branch]:
        """
        Enumerate admissible branches in a fixed order.

        Args:
            problem: Detection problem
            config: Optimizer config (conjugate folding)

        Returns:
            List of branches; empty if K exceeds every reduced dimension
        """
        handler = self.routing_rules.get(SearchMode(problem.mode))
        if not handler:
            raise ValueError(f"Unknown search mode: {problem.mode}")
        return handler(problem, config or OptimizerConfig())

    def space(self, problem: Problem, branch: Branch) -> BranchSpace:
        handler = self.space_rules.get(branch.mode)
        if not handler:
            raise ValueError(f"Unknown search mode: {branch.mode}")
        return handler(problem, branch)

    def _route_unrestricted(self, problem: Problem, config: OptimizerConfig) -> List[Branch]:
        """One ambient branch."""
        if problem.K > 2 ** problem.n:
            return []
        return [Branch(problem.mode)]

    def _route_cyclic_basis(self, problem: Problem, config: OptimizerConfig) -> List[Branch]:
        if problem.K > cyclic_sector_basis(problem.n, 0).dim:
            return []
        return [Branch(SearchMode.CYCLIC_BASIS)]

    def _route_pi_basis(self, problem: Problem, config: OptimizerConfig) -> List[Branch]:
        if problem.K > problem.n + 1:
            return []
        return [Branch(SearchMode.PI_BASIS)]

    def _route_projector(self, problem: Problem, config: OptimizerConfig) -> List[Branch]:
        """All rank allocations, optionally filtered and folded."""
        group = problem.mode.group
        allocations = enumerate_rank_allocations(group, problem.n, problem.K)
        if problem.allocations is not None:
            wanted = {tuple(a) for a in problem.allocations}
            allocations = [a for a in allocations if a.ranks in wanted]
        if group is SymmetryGroup.CYCLIC and config.fold_conjugate_sectors:
            allocations = self._fold_conjugates(allocations, problem.n)
        return [
            Branch(problem.mode, index=i, allocation=allocation)
            for i, allocation in enumerate(allocations)
        ]

    @staticmethod
    def _fold_conjugates(allocations: List[RankAllocation], n: int) -> List[RankAllocation]:
        # complex conjugation maps sector ell to n - ell and preserves lambda*
        seen, kept = set(), []
        for allocation in allocations:
            ranks = allocation.ranks
            mirrored = (ranks[0],) + tuple(reversed(ranks[1:]))
            if mirrored in seen:
                continue
            seen.add(ranks)
            kept.append(allocation)
        return kept

    def _build(self, problem: Problem, branch: Branch, basis, blocks, penalty=(), check=()) -> BranchSpace:
        return BranchSpace(
            branch=branch,
            n=problem.n,
            K=problem.K,
            basis=basis,
            blocks=tuple(blocks),
            family_ops=_reduce(problem.family.dense_stack, basis),
            tuple_ops=_reduce(problem.tuple_.dense_stack, basis),
            penalty_generators=tuple(penalty),
            check_generators=tuple(check),
            allocation=branch.allocation,
        )

    def _space_unrestricted(self, problem: Problem, branch: Branch) -> BranchSpace:
        dim = 2 ** problem.n
        return self._build(problem, branch, None, [ParameterBlock(dim, problem.K)])

    def _space_cyclic_basis(self, problem: Problem, branch: Branch) -> BranchSpace:
        sector = cyclic_sector_basis(problem.n, 0)
        return self._build(
            problem, branch, sector.basis, [ParameterBlock(sector.dim, problem.K)],
            check=group_generators(SymmetryGroup.CYCLIC, problem.n),
        )

    def _space_pi_basis(self, problem: Problem, branch: Branch) -> BranchSpace:
        sector = symmetric_subspace_basis(problem.n)
        return self._build(
            problem, branch, sector.basis, [ParameterBlock(sector.dim, problem.K)],
            check=group_generators(SymmetryGroup.PERMUTATION, problem.n),
        )

    def _space_projector(self, problem: Problem, branch: Branch) -> BranchSpace:
        """Block-diagonal reduced frame over the active sectors or spin blocks."""
        allocation = branch.allocation
        active = allocation_bases(allocation, problem.n)
        ranks = [r for r in allocation.ranks if r]
        columns, blocks = [], []
        row, col = 0, 0
        for (basis, width, copies), rank in zip(active, ranks):
            columns.append(basis)
            blocks.append(ParameterBlock(width, rank, row, col, copies))
            row += width * copies
            col += rank * copies
        return self._build(
            problem, branch, np.column_stack(columns), blocks,
            check=group_generators(allocation.group, problem.n),
        )

    def _space_soft_penalty(self, problem: Problem, branch: Branch) -> BranchSpace:
        generators = group_generators(problem.penalty_group, problem.n)
        return self._build(
            problem, branch, None, [ParameterBlock(2 ** problem.n, problem.K)],
            penalty=generators, check=generators,
        )
