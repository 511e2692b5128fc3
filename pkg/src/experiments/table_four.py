"""Five-mode comparison table for the four- and five-qubit configurations."""
from typing import Optional, Sequence

from pydantic import BaseModel, Field

from src.experiments.expected import ExpectedSpectrum, expected, load_table
from src.models.pauli import ErrorFamily
from src.models.search import OptimizerConfig, Problem, SearchMode, SpectrumResult
from src.models.study import StudyInstance, StudyReport
from src.quantum.pauli import build_family
from src.services.spectrum_engine import SpectrumEngine

TABLE_MODES = (
    SearchMode.UNRESTRICTED,
    SearchMode.CYCLIC_BASIS,
    SearchMode.CYCLIC_PROJECTOR,
    SearchMode.PI_BASIS,
    SearchMode.PI_PROJECTOR,
)

# (inner, outer) pairs whose validated values must nest
CONTAINMENT = (
    (SearchMode.CYCLIC_BASIS, SearchMode.CYCLIC_PROJECTOR),
    (SearchMode.CYCLIC_PROJECTOR, SearchMode.UNRESTRICTED),
    (SearchMode.PI_BASIS, SearchMode.PI_PROJECTOR),
    (SearchMode.PI_PROJECTOR, SearchMode.UNRESTRICTED),
)


class TableRow(BaseModel):
    """Spectra of one configuration under the five search modes."""

    model_config = {"arbitrary_types_allowed": True}

    id: str
    n: int
    K: int
    family: str
    spectra: dict[str, SpectrumResult] = Field(default_factory=dict)
    checks: dict[str, tuple[bool, str]] = Field(default_factory=dict)
    containment: dict[str, bool] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.checks.values()) and all(self.containment.values())


def contained(inner: Sequence[float], outer: Sequence[float], tol: float) -> bool:
    """Every inner value lies within the validated range of the outer values."""
    if not inner:
        return True
    if not outer:
        return False
    low, high = min(outer) - tol, max(outer) + tol
    return all(low <= v <= high for v in inner)


def table_row(
    n: int,
    K: int,
    family: ErrorFamily,
    tuple_: Optional[ErrorFamily] = None,
    config: Optional[OptimizerConfig] = None,
    engine: Optional[SpectrumEngine] = None,
    row_id: Optional[str] = None,
    expected_cells: Optional[Sequence[ExpectedSpectrum]] = None,
    tol: float = 2e-2,
) -> TableRow:
    """
    Run all five modes with a shared config.

    Args:
        n: Qubit count (at most 5)
        K: Code rank
        family: Detectable family
        tuple_: Signature tuple, defaults to the family
        expected_cells: Expected spectra in TABLE_MODES order, when known

    Returns:
        TableRow: Spectra, per-cell checks and containment flags
    """
    if n > 5:
        raise ValueError(f"Five-mode rows support n <= 5, got {n}")
    engine = engine or SpectrumEngine(config)
    base = Problem(n, K, family, signature_tuple=tuple_)
    row = TableRow(id=row_id or f"{family.label}:K={K}", n=n, K=K, family=family.label)
    for i, mode in enumerate(TABLE_MODES):
        result = engine.reconstruct_spectrum(base.with_mode(mode))
        row.spectra[mode.value] = result
        if expected_cells is not None:
            row.checks[mode.value] = expected_cells[i].check(result, tol)

    dedup = engine.config.dedup_tol
    for inner, outer in CONTAINMENT:
        row.containment[f"{inner.value}<={outer.value}"] = contained(
            row.spectra[inner.value].distinct, row.spectra[outer.value].distinct, dedup
        )
    return row


def _row_family(n: int, descriptor: dict) -> ErrorFamily:
    return build_family(descriptor["kind"], n, d=descriptor.get("d"), r=descriptor.get("r"))


def table_four(
    config: Optional[OptimizerConfig] = None,
    engine: Optional[SpectrumEngine] = None,
    rows: Optional[Sequence[str]] = None,
) -> StudyReport:
    """Every shipped row (or the selected ``rows``) with pass/fail per cell."""
    engine = engine or SpectrumEngine(config)
    cfg = engine.config
    data = load_table("table_four")
    report = StudyReport(study="table-iv", seed=cfg.seed, config=cfg.model_dump(mode="json"))

    for spec in data["rows"]:
        if rows is not None and spec["id"] not in rows:
            continue
        cells = [expected(c) for c in spec["cells"]]
        tol = spec.get("tolerance", data["tolerance"])
        row = table_row(
            spec["n"], spec["K"], _row_family(spec["n"], spec["family"]),
            engine=engine, row_id=spec["id"], expected_cells=cells, tol=tol,
        )
        for mode, cell in zip(TABLE_MODES, cells):
            result = row.spectra[mode.value]
            passed, note = row.checks[mode.value]
            name = f"{spec['id']}:{mode.value}"
            report.add(StudyInstance.from_result(name, result, expected=cell.label, passed=passed, note=note))
            engine.ledger.log_study_instance(report.study, name, result.shape.value, passed)
        for label, ok in row.containment.items():
            report.checks[f"{spec['id']}:{label}"] = ok
    return report
