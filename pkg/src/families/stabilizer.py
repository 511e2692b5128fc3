"""Stabilizer endpoints of the three-qubit families."""
from math import sqrt
from typing import Callable

from src.families.base import FamilyEntry
from src.families.three_qubit import e1_family, e2_family, e3_family, e4_family
from src.models.pauli import ErrorFamily
from src.quantum.codespace import stabilizer_projector
from src.quantum.pauli import parse_pauli

STABILIZERS = {
    "S1_min": ["YII", "IYY"],
    "S1_max": ["XII", "IYY"],
    "S2_min": ["XZZ", "ZXZ"],
    "S2_max": ["ZZI", "IZZ"],
    "S3_min": ["XZZ", "ZXZ"],
    "S3_max": ["XII", "IZZ"],
    "S4": ["YYI", "IYY"],
}


def _stabilizer_entry(name: str, factory: Callable[[], ErrorFamily], value: float) -> FamilyEntry:
    generators = [parse_pauli(label) for label in STABILIZERS[name]]
    return FamilyEntry(
        id=f"stab_{name}",
        n=3,
        K=2,
        family_factory=factory,
        vectors=lambda p: list(stabilizer_projector(generators).psi.T),
        predicted=lambda p: value,
        description="stabilizer code <" + ", ".join(STABILIZERS[name]) + ">",
    )


ENTRIES = [
    _stabilizer_entry("S1_min", e1_family, 0.0),
    _stabilizer_entry("S1_max", e1_family, 1.0),
    _stabilizer_entry("S2_min", e2_family, 0.0),
    _stabilizer_entry("S2_max", e2_family, sqrt(3)),
    _stabilizer_entry("S3_min", e3_family, 0.0),
    _stabilizer_entry("S3_max", e3_family, sqrt(2)),
    _stabilizer_entry("S4", e4_family, 0.0),
]
