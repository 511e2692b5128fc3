"""Search problem, optimizer configuration, candidates and spectrum results."""
import enum
from dataclasses import dataclass, field
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.config import settings
from src.models.frame import CodeFrame
from src.models.pauli import ErrorFamily
from src.models.symmetry import RankAllocation, SymmetryGroup


class SearchMode(str, enum.Enum):
    """Symmetry restriction of a search."""
    UNRESTRICTED = "unrestricted"
    CYCLIC_BASIS = "cyclic_basis"
    CYCLIC_PROJECTOR = "cyclic_projector"
    PI_BASIS = "pi_basis"
    PI_PROJECTOR = "pi_projector"
    SOFT_PENALTY = "soft_penalty"

    @property
    def group(self) -> Optional[SymmetryGroup]:
        if self in (SearchMode.CYCLIC_BASIS, SearchMode.CYCLIC_PROJECTOR):
            return SymmetryGroup.CYCLIC
        if self in (SearchMode.PI_BASIS, SearchMode.PI_PROJECTOR):
            return SymmetryGroup.PERMUTATION
        return None


class ObjectiveKind(str, enum.Enum):
    ENDPOINT_MIN = "endpoint_min"
    ENDPOINT_MAX = "endpoint_max"
    TARGET = "target"
    FEASIBILITY = "feasibility"


class SpectrumShape(str, enum.Enum):
    EMPTY = "empty"
    SINGLETON = "singleton"
    INTERVAL = "interval"
    DISCONNECTED = "disconnected"
    UNCLASSIFIED = "unclassified"


@dataclass(frozen=True)
class Objective:
    """Signature term added to the penalized KL loss."""

    kind: ObjectiveKind
    target: Optional[float] = None

    @classmethod
    def endpoint_min(cls) -> "Objective":
        return cls(ObjectiveKind.ENDPOINT_MIN)

    @classmethod
    def endpoint_max(cls) -> "Objective":
        return cls(ObjectiveKind.ENDPOINT_MAX)

    @classmethod
    def at_target(cls, lambda_sq: float) -> "Objective":
        return cls(ObjectiveKind.TARGET, float(lambda_sq))

    @classmethod
    def feasibility(cls) -> "Objective":
        return cls(ObjectiveKind.FEASIBILITY)

    @property
    def label(self) -> str:
        if self.kind is ObjectiveKind.TARGET:
            return f"target({self.target:.6g})"
        return self.kind.value


@dataclass(frozen=True)
class Problem:
    """
    Detection problem: find rank-K frames detecting ``family``.

    ``signature_tuple`` defaults to the family. ``allocations`` optionally
    restricts projector-level searches to the listed rank allocations.
    """

    n: int
    K: int
    family: ErrorFamily
    signature_tuple: Optional[ErrorFamily] = None
    mode: SearchMode = SearchMode.UNRESTRICTED
    penalty_group: SymmetryGroup = SymmetryGroup.CYCLIC
    allocations: Optional[tuple[tuple[int, ...], ...]] = None

    @property
    def tuple_(self) -> ErrorFamily:
        return self.family if self.signature_tuple is None else self.signature_tuple

    @property
    def label(self) -> str:
        return f"n={self.n},K={self.K},{self.family.label},{self.mode.value}"

    def with_mode(self, mode: SearchMode, allocations=None) -> "Problem":
        return Problem(self.n, self.K, self.family, self.signature_tuple, SearchMode(mode),
                       self.penalty_group, allocations)

    def validate(self) -> tuple[bool, str]:
        """
        Validate problem consistency.

        Returns:
            Tuple of (is_valid, error_message)
        """
        if self.n < 1 or self.K < 1:
            return False, "n and K must be positive"
        if self.K > 2 ** self.n:
            return False, f"K={self.K} exceeds the Hilbert space dimension {2 ** self.n}"
        if self.family.n != self.n:
            return False, f"Family acts on {self.family.n} qubits, problem has {self.n}"
        if not self.tuple_.issubset(self.family):
            return False, "Signature tuple is not contained in the detectable family"
        return True, ""


class OptimizerConfig(BaseModel):
    """Penalty weights, restart counts, schedules and acceptance tolerances."""

    model_config = ConfigDict(extra="forbid")

    mu: float = Field(default_factory=lambda: settings.mu_initial, gt=0)
    mu_growth: float = Field(default_factory=lambda: settings.mu_growth, gt=1)
    mu_max: float = Field(default_factory=lambda: settings.mu_max, gt=0)
    mu_sym: Optional[float] = None
    restarts: int = Field(default_factory=lambda: settings.restarts, ge=1)
    adam_steps: int = Field(default_factory=lambda: settings.adam_steps, ge=0)
    adam_step_size: float = Field(default_factory=lambda: settings.adam_step_size, gt=0)
    adam_beta1: float = Field(default_factory=lambda: settings.adam_beta1)
    adam_beta2: float = Field(default_factory=lambda: settings.adam_beta2)
    cosine_cycles: int = Field(default_factory=lambda: settings.cosine_cycles, ge=1)
    lbfgs_iterations: int = Field(default_factory=lambda: settings.lbfgs_iterations, ge=1)
    polish_iterations: int = Field(default_factory=lambda: settings.polish_iterations, ge=0)
    grid_points: int = Field(default_factory=lambda: settings.grid_points, ge=0)
    grid_order: str = "ascending"
    seed: int = Field(default_factory=lambda: settings.seed, ge=0)
    eps_kl: float = Field(default_factory=lambda: settings.eps_kl, gt=0)
    eps_sym: float = Field(default_factory=lambda: settings.eps_sym, gt=0)
    dedup_tol: float = Field(default_factory=lambda: settings.dedup_tol, gt=0)
    target_tol: float = Field(default_factory=lambda: settings.target_tol, gt=0)
    singleton_span: float = Field(default_factory=lambda: settings.singleton_span, gt=0)
    workers: int = Field(default_factory=lambda: settings.workers, ge=1)
    stop_on_success: bool = True
    escalate_unreached: bool = True
    fold_conjugate_sectors: bool = False

    @field_validator("grid_points")
    @classmethod
    def check_grid(cls, v):
        """A grid needs at least two points unless disabled."""
        if v == 1:
            raise ValueError("grid_points must be 0 (disabled) or at least 2")
        return v

    @field_validator("grid_order")
    @classmethod
    def check_order(cls, v):
        if v not in ("ascending", "descending"):
            raise ValueError("grid_order must be 'ascending' or 'descending'")
        return v

    @model_validator(mode="after")
    def check_mu_cap(self):
        if self.mu_max < self.mu:
            raise ValueError("mu_max must not be smaller than mu")
        return self

    @property
    def grid_enabled(self) -> bool:
        return self.grid_points >= 2

    @property
    def effective_mu_sym(self) -> float:
        return self.mu if self.mu_sym is None else self.mu_sym

    @classmethod
    def from_settings(cls, **overrides) -> "OptimizerConfig":
        """Config seeded from settings; ``None`` overrides are ignored."""
        return cls(**{k: v for k, v in overrides.items() if v is not None})


@dataclass(frozen=True)
class Branch:
    """One reduced search space: a mode plus an optional rank allocation."""

    mode: SearchMode
    index: int = 0
    allocation: Optional[RankAllocation] = None

    @property
    def label(self) -> str:
        if self.allocation is None:
            return self.mode.value
        return f"{self.mode.value}[{','.join(str(r) for r in self.allocation.ranks)}]"


@dataclass(eq=False)
class Candidate:
    """Optimizer output with independently recomputed residuals."""

    branch: Branch
    objective: Objective
    frame: Optional[CodeFrame]
    loss: float
    kl_residual: float
    sym_residual: float
    lambdas: list[float]
    lambda_star: float
    seed: tuple[int, ...]
    iterations: int
    accepted: bool
    mu_final: float = 0.0
    rejection: str = ""
    parameters: Optional[list] = field(default=None, repr=False)

    @property
    def lambda_sq(self) -> float:
        return self.lambda_star ** 2


class ValidatedValue(BaseModel):
    lambda_star: float
    lambda_sq: float
    branch: str
    objective: str
    kl_residual: float
    sym_residual: float
    seed: list[int]

    @classmethod
    def from_candidate(cls, candidate: Candidate) -> "ValidatedValue":
        return cls(
            lambda_star=candidate.lambda_star,
            lambda_sq=candidate.lambda_sq,
            branch=candidate.branch.label,
            objective=candidate.objective.label,
            kl_residual=candidate.kl_residual,
            sym_residual=candidate.sym_residual,
            seed=list(candidate.seed),
        )


class UnreachedTarget(BaseModel):
    """Grid target with no validated candidate; numerical evidence only."""

    branch: str
    target_lambda_sq: float
    best_gap: Optional[float] = None
    best_kl_residual: Optional[float] = None
    restarts: int = 0
    escalated: bool = False


class BranchSummary(BaseModel):
    label: str
    allocation: Optional[list[int]] = None
    lambda_min: Optional[float] = None
    lambda_max: Optional[float] = None
    validated: int = 0
    targets_total: int = 0
    targets_achieved: int = 0


class SpectrumResult(BaseModel):
    """Validated lambda* values with provenance and a shape classification."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    problem: str
    mode: SearchMode
    values: list[ValidatedValue] = Field(default_factory=list)
    distinct: list[float] = Field(default_factory=list)
    lambda_min: Optional[float] = None
    lambda_max: Optional[float] = None
    unreached: list[UnreachedTarget] = Field(default_factory=list)
    branches: list[BranchSummary] = Field(default_factory=list)
    shape: SpectrumShape = SpectrumShape.EMPTY
    candidates: list[Candidate] = Field(default_factory=list, exclude=True, repr=False)

    def validated_lambdas(self) -> list[float]:
        return [v.lambda_star for v in self.values]
