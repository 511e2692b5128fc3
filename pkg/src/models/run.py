"""Run ledger events and CLI run configuration."""
import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.models.pauli import FamilyKind
from src.models.search import OptimizerConfig, SearchMode
from src.models.symmetry import SymmetryGroup


class RunAction(str, enum.Enum):
    """Run ledger action enumeration."""
    # Search actions
    SPECTRUM_STARTED = "spectrum_started"
    BRANCH_STARTED = "branch_started"
    CANDIDATE_VALIDATED = "candidate_validated"
    CANDIDATE_REJECTED = "candidate_rejected"
    TARGET_ACHIEVED = "target_achieved"
    TARGET_UNREACHED = "target_unreached"
    TARGET_ESCALATED = "target_escalated"
    SPECTRUM_CLASSIFIED = "spectrum_classified"

    # Oracle actions
    FAMILY_VERIFIED = "family_verified"
    FAMILY_VIOLATION = "family_violation"

    # Study actions
    STUDY_STARTED = "study_started"
    STUDY_INSTANCE = "study_instance"
    STUDY_COMPLETED = "study_completed"

    # System actions
    OUTPUT_WRITTEN = "output_written"
    ERROR_OCCURRED = "error_occurred"


@dataclass
class RunEvent:
    """One ledger entry."""

    action: RunAction
    description: str = ""
    data: dict = field(default_factory=dict)
    subject: Optional[str] = None

    def __repr__(self):
        return f"<RunEvent(action={self.action.value}, subject={self.subject})>"

    @classmethod
    def create_event(
        cls,
        action: RunAction,
        subject: Optional[str] = None,
        description: Optional[str] = None,
        data: Optional[dict] = None
    ) -> "RunEvent":
        """
        Factory method to create ledger entries.

        Args:
            action: The action being logged
            subject: Problem, branch or study the event refers to
            description: Human-readable description
            data: Additional context data

        Returns:
            RunEvent: New ledger entry
        """
        return cls(action=action, subject=subject, description=description or "", data=data or {})


class FamilyDescriptor(BaseModel):
    """Error family as written in a run configuration."""

    model_config = ConfigDict(extra="forbid")

    kind: FamilyKind
    n: Optional[int] = None
    d: Optional[int] = None
    r: Optional[int] = None
    letters: Optional[str] = None
    members: Optional[list[str]] = None


class ProblemDescriptor(BaseModel):
    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1)
    K: int = Field(ge=1)
    family: Optional[FamilyDescriptor] = None
    paulis: Optional[list[str]] = None
    signature_tuple: Optional[list[str]] = None
    mode: SearchMode = SearchMode.UNRESTRICTED
    penalty_group: SymmetryGroup = SymmetryGroup.CYCLIC
    allocations: Optional[list[list[int]]] = None

    @model_validator(mode="after")
    def check_family_source(self):
        if (self.family is None) == (self.paulis is None):
            raise ValueError("exactly one of 'family' or 'paulis' must be given")
        return self


class RunConfig(BaseModel):
    """Complete, archivable description of a scan."""

    model_config = ConfigDict(extra="forbid")

    problem: ProblemDescriptor
    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)
    output: Optional[Path] = None
    format: str = "json"

    @field_validator("format")
    @classmethod
    def check_format(cls, v):
        """Only JSON and CSV are written."""
        v = v.lower()
        if v not in ("json", "csv"):
            raise ValueError("format must be 'json' or 'csv'")
        return v

    def snapshot(self) -> dict[str, Any]:
        """Serialized config with every default explicit."""
        return self.model_dump(mode="json")
