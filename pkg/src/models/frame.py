"""Code frame and detection report records."""
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, Field


@dataclass(frozen=True, eq=False)
class CodeFrame:
    """D x K column-orthonormal matrix representing the projector P = Psi Psi^H."""

    n: int
    psi: np.ndarray

    @property
    def dim(self) -> int:
        return self.psi.shape[0]

    @property
    def K(self) -> int:
        return self.psi.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.psi @ self.psi.conj().T

    def __repr__(self) -> str:
        return f"<CodeFrame(n={self.n}, K={self.K})>"


@dataclass(frozen=True, eq=False)
class CompressionReport:
    """Per-operator compressions M_F = Psi^H F Psi and their scalar parts."""

    matrices: np.ndarray
    kappa: np.ndarray
    residuals: np.ndarray

    @property
    def kl_residual(self) -> float:
        return float(np.sum(self.residuals))


class SignatureVector(BaseModel):
    """Signature expectations on rho_P = P/K and their Euclidean norm."""

    lambdas: list[float]
    lambda_star: float

    @property
    def lambda_sq(self) -> float:
        return self.lambda_star ** 2

    @classmethod
    def from_values(cls, values) -> "SignatureVector":
        arr = np.asarray(values, dtype=float)
        return cls(lambdas=arr.tolist(), lambda_star=float(np.linalg.norm(arr)))


class DetectionReport(BaseModel):
    """Outcome of validating a frame against an error family."""

    accepted: bool
    kl_residual: float
    orthonormality_error: float
    eps_kl: float
    signature: SignatureVector
    labels: list[str] = Field(default_factory=list)

    @property
    def lambda_star(self) -> float:
        return self.signature.lambda_star
