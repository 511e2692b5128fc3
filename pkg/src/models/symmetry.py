"""Symmetry sector and rank allocation records."""
import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class SymmetryGroup(str, enum.Enum):
    """Qubit permutation groups used for symmetry-adapted searches."""
    CYCLIC = "cyclic"
    PERMUTATION = "permutation"


@dataclass(frozen=True, eq=False)
class SectorBasis:
    """Isometry B onto a symmetry sector."""

    label: str
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True, eq=False)
class SpinBlock:
    """Spin-j block with multiplicity m_j.

    ``basis`` holds the m_j copies side by side (multiplicity-major), each copy
    spanning |j, m> for m = j, j-1, ..., -j.
    """

    j: Fraction
    multiplicity: int
    basis: np.ndarray

    @property
    def block_dim(self) -> int:
        return int(2 * self.j + 1)

    def copy(self, index: int) -> np.ndarray:
        """Basis of multiplicity copy ``index``."""
        width = self.block_dim
        return self.basis[:, index * width:(index + 1) * width]


@dataclass(frozen=True, eq=False)
class BlockDecomposition:
    n: int
    blocks: tuple[SpinBlock, ...]

    @property
    def total_dim(self) -> int:
        return sum(b.block_dim * b.multiplicity for b in self.blocks)


@dataclass(frozen=True)
class RankAllocation:
    """Per-sector (cyclic) or per-block (permutation) code ranks."""

    group: SymmetryGroup
    ranks: tuple[int, ...]

    @property
    def label(self) -> str:
        return f"{self.group.value}:" + ",".join(str(r) for r in self.ranks)

    def as_list(self) -> list[int]:
        return list(self.ranks)
