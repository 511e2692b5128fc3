"""Two-qubit families: the continuous interval and the two anchored singletons."""
from math import cos, sin, sqrt

from src.families.base import FamilyEntry, ParameterSpec
from src.quantum.codespace import ket
from src.quantum.pauli import family_from_labels


def _interval_vectors(p):
    a = p["a"]
    b = sqrt(max(0.0, 1.0 - a * a)) * complex(cos(p["b_phase"]), sin(p["b_phase"]))
    return [ket(2, {"00": a, "01": b}), ket(2, {"10": a, "11": b})]


N2_INTERVAL = FamilyEntry(
    id="n2_interval",
    n=2,
    K=2,
    family_factory=lambda: family_from_labels(["IX", "IY"], label="n2:(X2,Y2)"),
    vectors=_interval_vectors,
    predicted=lambda p: 2.0 * p["a"] * sqrt(max(0.0, 1.0 - p["a"] ** 2)),
    parameters=(
        ParameterSpec("a", 0.0, 1.0, "amplitude of |00>"),
        ParameterSpec("b_phase", 0.0, 6.283185307179586, "phase of the |01> amplitude"),
    ),
    description="|0_L> = a|00> + b|01>, |1_L> = X_1|0_L>; fills [0, 1] for (X_2, Y_2)",
)

N2_EVEN = FamilyEntry(
    id="n2_even",
    n=2,
    K=2,
    family_factory=lambda: family_from_labels(["ZZ", "IX", "IY"], label="n2:(Z1Z2,X2,Y2)"),
    vectors=lambda p: [ket(2, {"00": 1}), ket(2, {"11": 1})],
    predicted=lambda p: 1.0,
    description="even-parity projector span{|00>, |11>}",
)

N2_Z_ANCHORED = FamilyEntry(
    id="n2_z_anchored",
    n=2,
    K=2,
    family_factory=lambda: family_from_labels(["IX", "IY", "IZ"], label="n2:(X2,Y2,Z2)"),
    vectors=lambda p: [ket(2, {"01": 1}), ket(2, {"11": 1})],
    predicted=lambda p: 1.0,
    description="Z_2 = -1 projector span{|01>, |11>}",
)

ENTRIES = [N2_INTERVAL, N2_EVEN, N2_Z_ANCHORED]
