"""JSON and CSV emission of spectrum results and study reports."""
import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Optional

from src.config import settings
from src.exceptions import OutputError
from src.models.search import SpectrumResult
from src.models.study import StudyReport

RESULT_COLUMNS = [
    "record", "problem", "mode", "shape", "branch", "objective",
    "lambda_star", "lambda_sq", "kl_residual", "sym_residual", "seed",
]


def format_lambda(value: Optional[float], digits: Optional[int] = None) -> Optional[float]:
    """Round to the configured number of significant digits."""
    if value is None:
        return None
    digits = digits or settings.results_significant_digits
    return float(f"{value:.{digits}g}")


def format_residual(value: Optional[float]) -> Optional[str]:
    return None if value is None else f"{value:.3e}"


def result_rows(result: SpectrumResult) -> list[dict[str, Any]]:
    """Flat rows shared by the JSON and CSV emissions."""
    head = {"problem": result.problem, "mode": result.mode.value, "shape": result.shape.value}
    rows = []
    for value in result.values:
        rows.append({
            "record": "value",
            **head,
            "branch": value.branch,
            "objective": value.objective,
            "lambda_star": format_lambda(value.lambda_star),
            "lambda_sq": format_lambda(value.lambda_sq),
            "kl_residual": format_residual(value.kl_residual),
            "sym_residual": format_residual(value.sym_residual),
            "seed": "-".join(str(s) for s in value.seed),
        })
    for target in result.unreached:
        rows.append({
            "record": "unreached",
            **head,
            "branch": target.branch,
            "objective": "target",
            "lambda_star": None,
            "lambda_sq": format_lambda(target.target_lambda_sq),
            "kl_residual": format_residual(target.best_kl_residual),
            "sym_residual": None,
            "seed": None,
        })
    return rows


def result_document(result: SpectrumResult, config: dict[str, Any]) -> dict[str, Any]:
    """Self-describing result document with the config snapshot embedded."""
    return {
        "problem": result.problem,
        "mode": result.mode.value,
        "shape": result.shape.value,
        "lambda_min": format_lambda(result.lambda_min),
        "lambda_max": format_lambda(result.lambda_max),
        "distinct": [format_lambda(v) for v in result.distinct],
        "branches": [b.model_dump(mode="json") for b in result.branches],
        "unreached_note": "unreached targets are numerical evidence, not proofs of non-attainment",
        "rows": result_rows(result),
        "config": config,
    }


def _write_text(path: Path, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"Cannot write {path}: {exc}") from exc
    return path


def csv_text(rows: Iterable[dict[str, Any]], columns: list[str]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if row.get(k) is None else row.get(k)) for k in columns})
    return buffer.getvalue()


def write_result(result: SpectrumResult, config: dict[str, Any], path: Path, fmt: str = "json") -> Path:
    """
    Persist a spectrum result.

    Args:
        result: Reconstructed spectrum
        config: Run config snapshot
        path: Output file
        fmt: "json" or "csv"

    Returns:
        Path written

    Raises:
        OutputError: The file could not be written
    """
    if fmt == "csv":
        return _write_text(path, csv_text(result_rows(result), RESULT_COLUMNS))
    return _write_text(path, json.dumps(result_document(result, config), indent=2, sort_keys=True) + "\n")


def study_rows(report: StudyReport) -> list[dict[str, Any]]:
    return [
        {
            "study": report.study,
            "instance": i.name,
            "mode": i.mode,
            "shape": i.shape.value,
            "lambda_min": format_lambda(i.lambda_min),
            "lambda_max": format_lambda(i.lambda_max),
            "expected": i.expected,
            "passed": i.passed,
        }
        for i in report.instances
    ]


def write_study(report: StudyReport, path: Path, fmt: str = "json") -> Path:
    if fmt == "csv":
        rows = study_rows(report)
        columns = ["study", "instance", "mode", "shape", "lambda_min", "lambda_max", "expected", "passed"]
        return _write_text(path, csv_text(rows, columns))
    return _write_text(path, json.dumps(report.to_document(), indent=2, sort_keys=True, default=str) + "\n")
