"""Catalog entry definition for closed-form code families."""
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Optional, Sequence

import numpy as np

from src.exceptions import DomainError
from src.models.frame import CodeFrame
from src.models.pauli import ErrorFamily
from src.models.symmetry import SymmetryGroup
from src.quantum.codespace import frame_from_vectors

Params = Dict[str, float]


@dataclass(frozen=True)
class ParameterSpec:
    """A real family parameter with a closed domain [lower, upper]."""

    name: str
    lower: float
    upper: float
    description: str = ""

    def contains(self, value: float, slack: float = 1e-12) -> bool:
        return self.lower - slack <= value <= self.upper + slack


@dataclass(frozen=True)
class FamilyEntry:
    """
    Oracle family: constructor, associated error family and predicted lambda*.

    ``vectors`` returns the (unnormalized allowed) codewords for a parameter
    point; the frame is their polar orthonormalization.
    """

    id: str
    n: int
    K: int
    family_factory: Callable[[], ErrorFamily]
    vectors: Callable[[Params], Sequence[np.ndarray]]
    predicted: Callable[[Params], float]
    parameters: tuple[ParameterSpec, ...] = ()
    symmetry: Optional[SymmetryGroup] = None
    description: str = ""
    extra_check: Optional[Callable[[Params], tuple[bool, str]]] = field(default=None, compare=False)

    @property
    def parameter_names(self) -> list[str]:
        return [p.name for p in self.parameters]

    def family(self) -> ErrorFamily:
        return self.family_factory()

    def validate_params(self, params: Dict[str, Any]) -> tuple[bool, str]:
        """
        Validate a parameter point.

        Returns:
            Tuple of (is_valid, error_message)
        """
        for spec in self.parameters:
            if spec.name not in params:
                return False, f"Missing required parameter: {spec.name}"
            try:
                value = float(params[spec.name])
            except (TypeError, ValueError):
                return False, f"Parameter {spec.name} must be a real number"
            if not spec.contains(value):
                return False, (
                    f"Parameter {spec.name}={value:.6g} outside [{spec.lower:.6g}, {spec.upper:.6g}]"
                )
        unknown = set(params) - set(self.parameter_names)
        if unknown:
            return False, f"Unknown parameters: {', '.join(sorted(unknown))}"
        if self.extra_check is not None:
            return self.extra_check(self._clip(params))
        return True, ""

    def _clip(self, params: Dict[str, Any]) -> Params:
        return {
            p.name: float(np.clip(float(params[p.name]), p.lower, p.upper)) for p in self.parameters
        }

    def _checked(self, params: Optional[Dict[str, Any]]) -> Params:
        params = dict(params or {})
        ok, message = self.validate_params(params)
        if not ok:
            raise DomainError(f"{self.id}: {message}")
        return self._clip(params)

    def build(self, params: Optional[Dict[str, Any]] = None) -> CodeFrame:
        return frame_from_vectors(self.n, self.vectors(self._checked(params)))

    def predicted_lambda(self, params: Optional[Dict[str, Any]] = None) -> float:
        return float(self.predicted(self._checked(params)))

    def parameter_grid(self, points: int = 20) -> list[Params]:
        """
        Deterministic grid over the domain.

        One parameter: evenly spaced points. Two parameters: evenly spaced
        first coordinate paired with a stride-permuted second coordinate.
        """
        if not self.parameters:
            return [{}]
        if points < 2:
            return [{p.name: p.lower for p in self.parameters}]
        ticks = [np.linspace(p.lower, p.upper, points) for p in self.parameters]
        stride = next(s for s in (7, 11, 13, 3, 1) if np.gcd(s, points) == 1)
        grid = []
        for i in range(points):
            point = {}
            for axis, spec in enumerate(self.parameters):
                index = i if axis == 0 else (i * stride ** axis) % points
                point[spec.name] = float(ticks[axis][index])
            grid.append(point)
        return grid

    def summary(self) -> dict:
        return {
            "id": self.id,
            "n": self.n,
            "K": self.K,
            "family": self.family().label,
            "parameters": {p.name: [p.lower, p.upper] for p in self.parameters},
            "symmetry": self.symmetry.value if self.symmetry else None,
            "description": self.description,
        }
