"""Three-qubit families for the E_1, E_2, E_3 error sets and the disconnected tuple."""
from cmath import exp
from itertools import combinations, permutations
from math import pi, sin, sqrt

from src.families.base import FamilyEntry, ParameterSpec
from src.models.pauli import ErrorFamily, FamilyKind
from src.models.symmetry import SymmetryGroup
from src.quantum.codespace import ket
from src.quantum.pauli import build_family, family_from_labels, pauli_from_sites

DISCONNECTED_TUPLE = ["YXX", "XXI", "YXZ", "YIX", "IZI"]


def e1_family() -> ErrorFamily:
    """{X_i, Z_i}."""
    return build_family(FamilyKind.SINGLE_SITE, 3, letters="XZ", label="E1")


def e2_family() -> ErrorFamily:
    """{X_i, Y_i} plus all Z_i Z_j."""
    ops = list(build_family(FamilyKind.SINGLE_SITE, 3, letters="XY").members)
    ops += [pauli_from_sites(3, {i: "Z", j: "Z"}) for i, j in combinations(range(1, 4), 2)]
    return build_family(FamilyKind.EXPLICIT, 3, members=ops, label="E2")


def e3_family() -> ErrorFamily:
    """E_2 plus ZZZ."""
    ops = list(e2_family().members) + [pauli_from_sites(3, {1: "Z", 2: "Z", 3: "Z"})]
    return build_family(FamilyKind.EXPLICIT, 3, members=ops, label="E3")


def e4_family() -> ErrorFamily:
    """{X_i, Z_i, X_iX_j, Z_iZ_j (i<j), X_iZ_j (i != j)}."""
    ops = list(build_family(FamilyKind.SINGLE_SITE, 3, letters="XZ").members)
    pairs = list(combinations(range(1, 4), 2))
    ops += [pauli_from_sites(3, {i: "X", j: "X"}) for i, j in pairs]
    ops += [pauli_from_sites(3, {i: "Z", j: "Z"}) for i, j in pairs]
    ops += [pauli_from_sites(3, {i: "X", j: "Z"}) for i, j in permutations(range(1, 4), 2)]
    return build_family(FamilyKind.EXPLICIT, 3, members=ops, label="E4")


def disconnected_family() -> ErrorFamily:
    return family_from_labels(DISCONNECTED_TUPLE, label="disconnected")


def _bell_pair_vectors(theta: float):
    phi = {"0": exp(0.5j * theta) / sqrt(2), "1": 1j * exp(-0.5j * theta) / sqrt(2)}
    # +1 eigenspace of Y_2 Y_3
    partners = [{"00": 1 / sqrt(2), "11": -1 / sqrt(2)}, {"01": 1 / sqrt(2), "10": 1 / sqrt(2)}]
    vectors = []
    for partner in partners:
        terms = {a + b: pa * pb for a, pa in phi.items() for b, pb in partner.items()}
        vectors.append(ket(3, terms))
    return vectors


def _p2_vectors(u: float, v: float):
    pp = sqrt((1 + u) * (1 + v))
    pm = sqrt((1 + u) * (1 - v))
    mp = sqrt((1 - u) * (1 + v))
    mm = sqrt((1 - u) * (1 - v))
    zero = ket(3, {"000": pp / 2, "100": pm / 2, "010": mp / 2, "110": -mm / 2})
    one = ket(3, {"111": pp / 2, "011": pm / 2, "101": mp / 2, "001": -mm / 2})
    return [zero, one]


N3_E1 = FamilyEntry(
    id="n3_E1",
    n=3,
    K=2,
    family_factory=e1_family,
    vectors=lambda p: _bell_pair_vectors(p["theta"]),
    predicted=lambda p: sin(p["theta"]),
    parameters=(ParameterSpec("theta", 0.0, pi / 2, "rotation angle of the first qubit"),),
    description="|phi(theta)><phi(theta)| (x) (I + Y_2 Y_3)/2",
)

N3_E2 = FamilyEntry(
    id="n3_E2",
    n=3,
    K=2,
    family_factory=e2_family,
    vectors=lambda p: _p2_vectors(p["u"], p["v"]),
    predicted=lambda p: sqrt(2 * p["u"] ** 2 + 2 * p["v"] ** 2 - p["u"] ** 2 * p["v"] ** 2),
    parameters=(ParameterSpec("u", 0.0, 1.0), ParameterSpec("v", 0.0, 1.0)),
    description="two-parameter family interpolating the E_2 stabilizer endpoints",
)

N3_E3 = FamilyEntry(
    id="n3_E3",
    n=3,
    K=2,
    family_factory=e3_family,
    vectors=lambda p: _p2_vectors(p["t"], 0.0),
    predicted=lambda p: sqrt(2) * p["t"],
    parameters=(ParameterSpec("t", 0.0, 1.0),),
    description="restriction of the E_2 family to v = 0",
)

N3_DISC_0 = FamilyEntry(
    id="n3_disc_0",
    n=3,
    K=2,
    family_factory=disconnected_family,
    vectors=lambda p: [
        ket(3, {"000": 0.5, "011": -0.5, "101": -0.5, "110": -0.5}),
        ket(3, {"001": 0.5, "010": 0.5, "100": 0.5, "111": -0.5}),
    ],
    predicted=lambda p: 0.0,
    symmetry=SymmetryGroup.CYCLIC,
    description="cyclic +1 code with vanishing signature",
)

N3_DISC_1 = FamilyEntry(
    id="n3_disc_1",
    n=3,
    K=2,
    family_factory=disconnected_family,
    vectors=lambda p: [
        ket(3, {"000": 0.5, "011": 0.5, "101": 0.5, "110": 0.5}),
        ket(3, {"001": 0.5, "010": 0.5, "100": 0.5, "111": 0.5}),
    ],
    predicted=lambda p: 1.0,
    symmetry=SymmetryGroup.CYCLIC,
    description="cyclic +1 code with signature (0, 1, 0, 0, 0)",
)

ENTRIES = [N3_E1, N3_E2, N3_E3, N3_DISC_0, N3_DISC_1]
