"""Loading run configurations and turning descriptors into problems."""
import json
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from src.exceptions import ConfigError, OutputError, PauliError
from src.models.pauli import ErrorFamily
from src.models.run import FamilyDescriptor, ProblemDescriptor, RunConfig
from src.models.search import Problem
from src.quantum.pauli import build_family, family_from_labels


def build_error_family(descriptor: FamilyDescriptor, n: int) -> ErrorFamily:
    """Error family for a descriptor; the descriptor's n must match when given."""
    if descriptor.n is not None and descriptor.n != n:
        raise ConfigError(f"Family descriptor acts on {descriptor.n} qubits, problem has {n}")
    return build_family(
        descriptor.kind,
        n,
        d=descriptor.d,
        r=descriptor.r,
        letters=descriptor.letters,
        members=descriptor.members,
    )


def build_problem(descriptor: ProblemDescriptor) -> Problem:
    """
    Problem from its configuration descriptor.

    Raises:
        ConfigError: Inconsistent family, tuple or allocation entries
    """
    try:
        if descriptor.family is not None:
            family = build_error_family(descriptor.family, descriptor.n)
        else:
            family = family_from_labels(descriptor.paulis)
        tuple_ = family_from_labels(descriptor.signature_tuple, label="tuple") if descriptor.signature_tuple else None
    except PauliError as exc:
        raise ConfigError(str(exc)) from exc

    allocations = None
    if descriptor.allocations is not None:
        allocations = tuple(tuple(int(r) for r in a) for a in descriptor.allocations)
    problem = Problem(
        n=descriptor.n,
        K=descriptor.K,
        family=family,
        signature_tuple=tuple_,
        mode=descriptor.mode,
        penalty_group=descriptor.penalty_group,
        allocations=allocations,
    )
    ok, message = problem.validate()
    if not ok:
        raise ConfigError(message)
    return problem


def parse_run_config(document: dict[str, Any]) -> RunConfig:
    """Validate a config document; a result document contributes its embedded snapshot."""
    if isinstance(document.get("config"), dict):
        document = document["config"]
    try:
        return RunConfig.model_validate(document)
    except ValidationError as exc:
        raise ConfigError(f"Invalid run configuration: {exc}") from exc


def load_run_config(path: Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"Cannot read config {path}: {exc}") from exc
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Config {path} is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise ConfigError(f"Config {path} must hold a JSON object")
    return parse_run_config(document)


def apply_overrides(config: RunConfig, problem: Optional[dict] = None, optimizer: Optional[dict] = None,
                    **top_level) -> RunConfig:
    """New config with flag overrides merged in; ``None`` values are ignored."""
    document = config.snapshot()
    document["problem"].update({k: v for k, v in (problem or {}).items() if v is not None})
    document["optimizer"].update({k: v for k, v in (optimizer or {}).items() if v is not None})
    document.update({k: v for k, v in top_level.items() if v is not None})
    return parse_run_config(document)
