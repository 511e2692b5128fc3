"""Oracle catalog of closed-form code families."""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from src.exceptions import UnknownEntryError
from src.families import five_qubit, permutation, stabilizer, three_qubit, two_qubit
from src.families.base import FamilyEntry, ParameterSpec
from src.models.frame import CodeFrame
from src.quantum.codespace import validate

_CATALOG: tuple[FamilyEntry, ...] = tuple(
    two_qubit.ENTRIES
    + three_qubit.ENTRIES
    + five_qubit.ENTRIES
    + permutation.ENTRIES
    + stabilizer.ENTRIES
)
_BY_ID = {entry.id: entry for entry in _CATALOG}


@dataclass
class OracleCheck:
    """Outcome of one oracle-consistency check."""

    family_id: str
    params: Dict[str, Any] = field(default_factory=dict)
    predicted: float = 0.0
    measured: float = 0.0
    kl_residual: float = 0.0
    passed: bool = True
    message: str = ""


def catalog() -> list[FamilyEntry]:
    """All catalog entries in a fixed order."""
    return list(_CATALOG)


def get_entry(family_id: str) -> FamilyEntry:
    entry = _BY_ID.get(family_id)
    if entry is None:
        raise UnknownEntryError(f"Unknown family id: {family_id}")
    return entry


def build(family_id: str, params: Optional[Dict[str, Any]] = None) -> CodeFrame:
    return get_entry(family_id).build(params)


def predicted_lambda(family_id: str, params: Optional[Dict[str, Any]] = None) -> float:
    return get_entry(family_id).predicted_lambda(params)


def verify_point(
    entry: FamilyEntry,
    params: Optional[Dict[str, Any]] = None,
    eps_kl: Optional[float] = None,
    lambda_tol: float = 1e-9,
) -> OracleCheck:
    """
    Check one parameter point of an oracle family.

    The frame must validate against the entry's family and its measured
    lambda* must match the closed form within ``lambda_tol``.

    Raises:
        DomainError: Parameters outside the family domain
    """
    frame = entry.build(params)
    predicted = entry.predicted_lambda(params)
    report = validate(frame, entry.family(), eps_kl=eps_kl)
    measured = report.signature.lambda_star
    problems = []
    if not report.accepted:
        problems.append(f"kl_residual {report.kl_residual:.3e} above {report.eps_kl:.1e}")
    if abs(measured - predicted) > lambda_tol:
        problems.append(f"lambda* {measured:.12g} != predicted {predicted:.12g}")
    return OracleCheck(
        family_id=entry.id,
        params=dict(params or {}),
        predicted=predicted,
        measured=measured,
        kl_residual=report.kl_residual,
        passed=not problems,
        message="; ".join(problems),
    )


def verify_grid(family_id: str, points: int = 20, eps_kl: Optional[float] = None) -> list[OracleCheck]:
    """Oracle checks over the deterministic parameter grid of a family."""
    entry = get_entry(family_id)
    return [verify_point(entry, params, eps_kl=eps_kl) for params in entry.parameter_grid(points)]


__all__ = [
    "FamilyEntry",
    "ParameterSpec",
    "OracleCheck",
    "catalog",
    "get_entry",
    "build",
    "predicted_lambda",
    "verify_point",
    "verify_grid",
]
