"""Two-qubit classification and the swap-symmetric collapse."""
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from src.experiments.expected import expected, load_table
from src.models.pauli import ErrorFamily
from src.models.search import OptimizerConfig, Problem, SearchMode, SpectrumResult
from src.models.study import StudyInstance, StudyReport
from src.exceptions import InfeasibleCompressionError
from src.models.frame import CodeFrame
from src.quantum.codespace import make_frame, signature, validate
from src.quantum.pauli import family_from_labels
from src.quantum.symmetry import (
    cyclic_sector_basis,
    forced_compression_witness,
    interlacing_forced_scalar,
    restricted_operator,
    swap_complement_projector,
)
from src.services.spectrum_engine import SpectrumEngine, dedupe

SWAP_ALLOCATIONS = ((2, 0), (1, 1))


def set_label(labels: Sequence[str]) -> str:
    return "{" + ",".join(labels) + "}"


def two_qubit_sets() -> list[tuple[str, list[str]]]:
    """(group, labels) for the 35 representative sets, in file order."""
    data = load_table("two_qubit_sets")
    return [(group, labels) for group, block in data["groups"].items() for labels in block["sets"]]


def classify_two_qubit(config: Optional[OptimizerConfig] = None,
                       engine: Optional[SpectrumEngine] = None) -> StudyReport:
    """
    Reconstruct the K=2 spectrum of every representative two-qubit set.

    Returns:
        StudyReport: One instance per set, checked against its stated group
    """
    engine = engine or SpectrumEngine(config)
    cfg = engine.config
    data = load_table("two_qubit_sets")
    report = StudyReport(study="classify-2q", seed=cfg.seed, config=cfg.model_dump(mode="json"))

    sizes = {}
    for group, block in data["groups"].items():
        target = expected(block["expected"])
        sizes[group] = len(block["sets"])
        for labels in block["sets"]:
            family = family_from_labels(labels, label=set_label(labels))
            result = engine.reconstruct_spectrum(Problem(2, data["K"], family))
            passed, note = target.check(result, tol=1e-3)
            if passed and group == "interval":
                missing = [b.label for b in result.branches if b.targets_achieved < b.targets_total]
                if missing:
                    passed, note = False, f"grid targets unreached on {missing}"
            report.add(StudyInstance.from_result(
                family.label, result, expected=target.label, passed=passed, note=note,
                details={"group": group},
            ))
            engine.ledger.log_study_instance(report.study, family.label, result.shape.value, passed)

    report.checks["group_sizes"] = (sizes.get("interval"), sizes.get("zero"), sizes.get("one")) == (7, 13, 15)
    return report


class SwapSpectrum(BaseModel):
    """Swap-basis and swap-projector spectra of one two-qubit set."""

    labels: list[str]
    forced_lambdas: Optional[list[float]] = None
    forced_lambda_star: Optional[float] = None
    forced_compatible: Optional[bool] = None
    certificate: str = ""
    basis: list[float] = Field(default_factory=list)
    projector: list[float] = Field(default_factory=list)
    complement_checks: list[bool] = Field(default_factory=list)
    agree: bool = False

    @property
    def spectrum(self) -> list[float]:
        return self.basis

    @property
    def label(self) -> str:
        if not self.basis:
            return "empty"
        return "{" + ", ".join(f"{v:.4g}" for v in self.basis) + "}"


def forced_signature(family: ErrorFamily) -> Optional[list[float]]:
    """
    Compressions pinned by interlacing inside the symmetric sector.

    The sector is three-dimensional and K = 2, so every member is forced to
    its middle restricted eigenvalue; returns None if any member is not.
    """
    sector = cyclic_sector_basis(2, 0)
    values = []
    for op in family:
        forced = interlacing_forced_scalar(restricted_operator(op, sector), 2)
        if forced is None:
            return None
        values.append(forced)
    return values


def forced_code(family: ErrorFamily, forced: Sequence[float]) -> Optional[CodeFrame]:
    """
    Symmetric-sector code realizing the forced scalars, or None when the
    forced eigenspaces share no two-dimensional subspace.
    """
    sector = cyclic_sector_basis(2, 0)
    restricted = [restricted_operator(op, sector) for op in family]
    code = forced_compression_witness(restricted, forced, 2)
    return None if code is None else make_frame(2, sector.basis @ code)


def _complement_check(result: SpectrumResult, family: ErrorFamily, eps_kl: float) -> list[bool]:
    checks = []
    for candidate in result.candidates:
        if candidate.branch.allocation is None or candidate.branch.allocation.ranks != (1, 1):
            continue
        complement = swap_complement_projector(candidate.frame)
        report = validate(complement, family, eps_kl=eps_kl)
        same = abs(signature(complement, family).lambda_star - candidate.lambda_star) <= 1e-6
        checks.append(report.accepted and same)
    return checks


def swap_two_qubit(error_set: Sequence[str] | ErrorFamily,
                   config: Optional[OptimizerConfig] = None,
                   engine: Optional[SpectrumEngine] = None) -> SwapSpectrum:
    """
    Swap-basis versus swap-projector spectrum of a two-qubit set.

    The basis search runs inside the symmetric sector after the interlacing
    pre-screen; the projector search covers allocations (2,0) and (1,1).
    (1,1) codes are mapped to their symmetric complement and revalidated.
    """
    engine = engine or SpectrumEngine(config)
    cfg = engine.config
    family = error_set if isinstance(error_set, ErrorFamily) else family_from_labels(list(error_set))
    problem = Problem(2, 2, family)
    try:
        forced = forced_signature(family)
        infeasible = None
    except InfeasibleCompressionError as exc:
        forced, infeasible = None, str(exc)

    witness, compatible, certificate = None, None, ""
    if infeasible is not None:
        compatible, certificate = False, f"empty: {infeasible}"
    elif forced is not None:
        witness = forced_code(family, forced)
        compatible = witness is not None and validate(witness, family, eps_kl=cfg.eps_kl).accepted
        if compatible:
            certificate = f"witness: lambda* = {signature(witness, family).lambda_star:.6g}"
        else:
            certificate = "empty: forced eigenspaces share no two-dimensional subspace"

    if compatible is False:
        basis_values = []
    else:
        basis = engine.reconstruct_spectrum(problem.with_mode(SearchMode.CYCLIC_BASIS))
        found = basis.validated_lambdas()
        if witness is not None:
            found.append(signature(witness, family).lambda_star)
        basis_values = dedupe(found, cfg.dedup_tol)
    projector = engine.reconstruct_spectrum(
        problem.with_mode(SearchMode.CYCLIC_PROJECTOR, allocations=SWAP_ALLOCATIONS)
    )
    projector_values = dedupe(projector.validated_lambdas(), cfg.dedup_tol)

    forced_star = None if forced is None else float(np.linalg.norm(forced))
    agree = len(basis_values) == len(projector_values) and all(
        abs(a - b) <= cfg.dedup_tol for a, b in zip(basis_values, projector_values)
    )
    if forced_star is not None:
        agree = agree and all(abs(v - forced_star) <= 1e-6 for v in basis_values)

    return SwapSpectrum(
        labels=family.labels,
        forced_lambdas=forced,
        forced_lambda_star=forced_star,
        forced_compatible=compatible,
        certificate=certificate,
        basis=basis_values,
        projector=projector_values,
        complement_checks=_complement_check(projector, family, cfg.eps_kl),
        agree=agree,
    )


def swap_study(config: Optional[OptimizerConfig] = None,
               engine: Optional[SpectrumEngine] = None) -> StudyReport:
    """Swap collapse over all representative sets: spectra agree and lie in {empty, {0}, {1}}."""
    engine = engine or SpectrumEngine(config)
    cfg = engine.config
    report = StudyReport(study="swap-2q", seed=cfg.seed, config=cfg.model_dump(mode="json"))
    for group, labels in two_qubit_sets():
        swap = swap_two_qubit(labels, engine=engine)
        allowed = len(swap.basis) <= 1 and all(min(abs(v), abs(v - 1.0)) <= 1e-6 for v in swap.basis)
        passed = swap.agree and allowed and all(swap.complement_checks)
        shape = "empty" if not swap.basis else "singleton"
        report.add(StudyInstance(
            name=set_label(labels),
            mode="swap",
            shape=shape,
            lambda_min=min(swap.basis) if swap.basis else None,
            lambda_max=max(swap.basis) if swap.basis else None,
            distinct=swap.basis,
            passed=passed,
            details={"group": group, **swap.model_dump(mode="json")},
        ))
        engine.ledger.log_study_instance(report.study, set_label(labels), shape, passed)
    return report
