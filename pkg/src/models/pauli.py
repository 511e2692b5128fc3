"""Pauli operator and error family records."""
import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Optional

import numpy as np


class FamilyKind(str, enum.Enum):
    """Error family constructors."""
    WEIGHT_BOUNDED = "weight_bounded"
    ASYM = "asym"
    MIX = "mix"
    SINGLE_SITE = "single_site"
    EXPLICIT = "explicit"


@dataclass(frozen=True, order=True)
class PauliOperator:
    """Hermitian n-qubit Pauli string in symplectic bit form.

    Qubit 1 is the most significant bit of ``x_bits``/``z_bits``; a site with
    both bits set carries Y.
    """

    n: int
    x_bits: int
    z_bits: int
    sign: int = 1

    @property
    def weight(self) -> int:
        return bin(self.x_bits | self.z_bits).count("1")

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    @property
    def key(self) -> tuple[int, int, int]:
        """Identity of the operator as a (x_bits, z_bits, sign) triple."""
        return (self.x_bits, self.z_bits, self.sign)

    @property
    def letters(self) -> str:
        out = []
        for site in range(self.n):
            bit = 1 << (self.n - 1 - site)
            x = bool(self.x_bits & bit)
            z = bool(self.z_bits & bit)
            out.append("Y" if x and z else "X" if x else "Z" if z else "I")
        return "".join(out)

    @property
    def label(self) -> str:
        return ("-" if self.sign < 0 else "") + self.letters

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class ErrorFamily:
    """Ordered tuple of Pauli operators.

    Serves both as the detectable set and as the signature tuple.
    """

    n: int
    members: tuple[PauliOperator, ...]
    label: str = "explicit"
    descriptor: Optional[dict] = field(default=None, compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[PauliOperator]:
        return iter(self.members)

    def __getitem__(self, index: int) -> PauliOperator:
        return self.members[index]

    @property
    def labels(self) -> list[str]:
        return [op.label for op in self.members]

    def issubset(self, other: "ErrorFamily") -> bool:
        """Check set containment up to member sign."""
        keys = {(op.x_bits, op.z_bits) for op in other.members}
        return other.n == self.n and all((op.x_bits, op.z_bits) in keys for op in self.members)

    @cached_property
    def dense_stack(self) -> np.ndarray:
        """Dense matrices of all members stacked as an (m, D, D) array."""
        from src.quantum.pauli import dense_matrix

        dim = 2 ** self.n
        if not self.members:
            return np.zeros((0, dim, dim), dtype=complex)
        return np.stack([dense_matrix(op) for op in self.members])
