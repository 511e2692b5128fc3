"""Study report records."""
from collections import Counter
from typing import Any, Optional

from pydantic import BaseModel, Field

from src.models.search import SpectrumResult, SpectrumShape


class StudyInstance(BaseModel):
    """One problem of a study with its spectrum and expectation check."""

    name: str
    mode: str
    shape: SpectrumShape
    lambda_min: Optional[float] = None
    lambda_max: Optional[float] = None
    distinct: list[float] = Field(default_factory=list)
    expected: Optional[str] = None
    passed: Optional[bool] = None
    note: str = ""
    details: dict[str, Any] = Field(default_factory=dict)

    @classmethod
    def from_result(cls, name: str, result: SpectrumResult, **kwargs) -> "StudyInstance":
        return cls(
            name=name,
            mode=result.mode.value,
            shape=result.shape,
            lambda_min=result.lambda_min,
            lambda_max=result.lambda_max,
            distinct=result.distinct,
            **kwargs,
        )


class StudyReport(BaseModel):
    """Per-instance spectra, behavior histogram, seed and config snapshot."""

    study: str
    seed: int
    config: dict[str, Any] = Field(default_factory=dict)
    instances: list[StudyInstance] = Field(default_factory=list)
    checks: dict[str, bool] = Field(default_factory=dict)

    @property
    def histogram(self) -> dict[str, int]:
        counts = Counter(i.shape.value for i in self.instances)
        return {shape.value: counts.get(shape.value, 0) for shape in SpectrumShape}

    @property
    def passed(self) -> bool:
        """All checked instances and all study-level checks passed."""
        instance_ok = all(i.passed is not False for i in self.instances)
        return instance_ok and all(self.checks.values())

    def add(self, instance: StudyInstance) -> StudyInstance:
        self.instances.append(instance)
        return instance

    def summary(self) -> dict[str, Any]:
        return {
            "study": self.study,
            "seed": self.seed,
            "instances": len(self.instances),
            "histogram": self.histogram,
            "passed": self.passed,
        }

    def to_document(self) -> dict[str, Any]:
        document = self.model_dump(mode="json")
        document["histogram"] = self.histogram
        document["passed"] = self.passed
        return document
