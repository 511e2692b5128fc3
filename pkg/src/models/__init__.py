"""Typed records shared by the kernels, services and CLI."""
from src.models.frame import CodeFrame, CompressionReport, DetectionReport, SignatureVector
from src.models.pauli import ErrorFamily, FamilyKind, PauliOperator
from src.models.run import FamilyDescriptor, ProblemDescriptor, RunAction, RunConfig, RunEvent
from src.models.search import (
    Branch,
    BranchSummary,
    Candidate,
    Objective,
    ObjectiveKind,
    OptimizerConfig,
    Problem,
    SearchMode,
    SpectrumResult,
    SpectrumShape,
    UnreachedTarget,
    ValidatedValue,
)
from src.models.study import StudyInstance, StudyReport
from src.models.symmetry import (
    BlockDecomposition,
    RankAllocation,
    SectorBasis,
    SpinBlock,
    SymmetryGroup,
)

__all__ = [
    "CodeFrame",
    "CompressionReport",
    "DetectionReport",
    "SignatureVector",
    "ErrorFamily",
    "FamilyKind",
    "PauliOperator",
    "FamilyDescriptor",
    "ProblemDescriptor",
    "RunAction",
    "RunConfig",
    "RunEvent",
    "Branch",
    "BranchSummary",
    "Candidate",
    "Objective",
    "ObjectiveKind",
    "OptimizerConfig",
    "Problem",
    "SearchMode",
    "SpectrumResult",
    "SpectrumShape",
    "UnreachedTarget",
    "ValidatedValue",
    "StudyInstance",
    "StudyReport",
    "BlockDecomposition",
    "RankAllocation",
    "SectorBasis",
    "SpinBlock",
    "SymmetryGroup",
]
