"""Versioned expected-value tables shipped with the study suites."""
import json
from functools import lru_cache
from math import sqrt
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, Field

from src.exceptions import ConfigError, UnknownEntryError
from src.models.search import SpectrumResult, SpectrumShape

DATA_DIR = Path(__file__).parent / "data"


class ExpectedSpectrum(BaseModel):
    """Expected shape and lambda*^2 values (endpoints or isolated points)."""

    shape: SpectrumShape
    lambda_sq: list[float] = Field(default_factory=list)
    tol: Optional[float] = Field(None, gt=0)

    @property
    def lambdas(self) -> list[float]:
        return [sqrt(max(v, 0.0)) for v in self.lambda_sq]

    @property
    def label(self) -> str:
        if self.shape is SpectrumShape.EMPTY:
            return "empty"
        points = ", ".join(f"{v:.4g}" for v in self.lambdas)
        if self.shape is SpectrumShape.INTERVAL:
            return f"[{points}]"
        return "{" + points + "}"

    def check(self, result: SpectrumResult, tol: float) -> tuple[bool, str]:
        """
        Compare a reconstructed spectrum against the expectation.

        The cell's own ``tol`` (lambda* units) overrides the caller's.

        Returns:
            Tuple of (passed, message)
        """
        tol = self.tol if self.tol is not None else tol
        if result.shape is not self.shape:
            return False, f"shape {result.shape.value}, expected {self.shape.value}"
        if self.shape is SpectrumShape.EMPTY:
            return True, ""
        if self.shape is SpectrumShape.DISCONNECTED:
            stray = [v for v in result.distinct if min(abs(v - p) for p in self.lambdas) > tol]
            if stray:
                return False, f"values {stray} outside {self.label}"
        low, high = self.lambdas[0], self.lambdas[-1]
        if abs(result.lambda_min - low) > tol or abs(result.lambda_max - high) > tol:
            return False, (
                f"endpoints ({result.lambda_min:.6g}, {result.lambda_max:.6g}), expected {self.label}"
            )
        return True, ""


@lru_cache(maxsize=None)
def load_table(name: str) -> dict[str, Any]:
    """Raw data file ``data/<name>.json``."""
    path = DATA_DIR / f"{name}.json"
    if not path.exists():
        raise UnknownEntryError(f"Unknown expected-value table: {name}")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"Corrupt expected-value table {name}: {exc}") from exc


def expected(spec: Optional[dict[str, Any]]) -> Optional[ExpectedSpectrum]:
    return None if spec is None else ExpectedSpectrum.model_validate(spec)


def reference_value(key: str) -> Any:
    values = load_table("reference_values")
    if key not in values:
        raise UnknownEntryError(f"Unknown reference value: {key}")
    return values[key]
