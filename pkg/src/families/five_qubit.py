"""Five-qubit cyclic and non-cyclic families."""
from math import sqrt

import numpy as np

from src.families.base import FamilyEntry, ParameterSpec
from src.models.pauli import FamilyKind
from src.models.symmetry import SymmetryGroup
from src.quantum.codespace import ket
from src.quantum.pauli import build_family, dense_matrix, parse_pauli
from src.quantum.symmetry import dicke_state

C522_T_MAX = (sqrt(6) - 1) / 5


def rotations(bits: str) -> list[str]:
    """The n cyclic shifts of a bitstring."""
    return [bits[-r:] + bits[:-r] if r else bits for r in range(len(bits))]


def cyc(bits: str) -> np.ndarray:
    """Normalized cyclic orbit state (1/sqrt(n)) sum_r T^r |bits> for a full-length orbit."""
    n = len(bits)
    vec = np.zeros(2 ** n, dtype=complex)
    for shifted in rotations(bits):
        vec[int(shifted, 2)] += 1.0
    return vec / sqrt(n)


def flip_all(vec: np.ndarray) -> np.ndarray:
    """X on every qubit."""
    return vec[::-1].copy()


def weight_bounded_52():
    return build_family(FamilyKind.WEIGHT_BOUNDED, 5, d=2)


def asym_52():
    return build_family(FamilyKind.ASYM, 5, r=2)


def mix_5():
    return build_family(FamilyKind.MIX, 5)


def _c522_vectors(p):
    t = p["t"]
    denom = 3 + 5 * t
    a0 = sqrt(max(0.0, (3 - 2 * t - 5 * t * t) / (4 * denom)))
    a1 = sqrt(max(0.0, (1 - 2 * t - 5 * t * t) / denom))
    a2 = sqrt(max(0.0, 5 * (5 * t * t + 6 * t + 1) / (8 * denom)))
    b1 = sqrt((1 + 5 * t) / 4)
    b2 = sqrt(max(0.0, (3 - 5 * t) / 8))
    zero = a0 * ket(5, {"00000": 1}) + a1 * ket(5, {"11111": 1}) + a2 * (cyc("00011") - cyc("00101"))
    one = b1 * cyc("00001") + b2 * (cyc("01011") - cyc("00111"))
    return [zero, one]


def _c532_vectors(p):
    first = sqrt(3 / 5) * ket(5, {"00000": 1}) + sqrt(2 / 5) * ket(5, {"11111": 1})
    return [first, cyc("00101"), cyc("00011")]


def _asym52_cyc_vectors(p):
    a0_sq = p["a0_sq"]
    a0 = sqrt(a0_sq)
    a1 = sqrt(max(0.0, 3 / 8 - a0_sq))
    a2 = -a1
    modulus_sq = a0_sq + 0.25
    real = -(3 / 8 - a0_sq) / (sqrt(5) * a0)
    a3 = complex(real, sqrt(max(0.0, modulus_sq - real * real)))
    zero = a0 * ket(5, {"00000": 1}) + a1 * cyc("00011") + a2 * cyc("00101") + a3 * cyc("01111")
    return [zero, flip_all(zero)]


NONCYC_STRINGS = ("00110", "01001", "01100", "10001", "10100", "11011")


def _asym52_noncyc_vectors(p):
    t = p["t"]
    amps = [0.5, sqrt(t), sqrt(max(0.0, 0.25 - t)), sqrt(max(0.0, 0.25 - t)), sqrt(t), 0.5]
    zero = ket(5, dict(zip(NONCYC_STRINGS, amps)))
    one = dense_matrix(parse_pauli("IIIIZ")) @ flip_all(zero)
    return [zero, one]


def _mix52_vectors(p):
    x = p["x"]
    alpha = complex(-sqrt(2 + x) / (4 * sqrt(2)), sqrt(x) / (2 * sqrt(2)))
    beta = sqrt(5) * sqrt(2 + x) / (4 * sqrt(2))
    gamma = complex(0.0, -sqrt(5) * sqrt(x) / 4)
    delta = (sqrt(5) / 4) * sqrt((1 - x) / (1 + x)) * complex(sqrt(2 + x), sqrt(x))
    dicke = [dicke_state(5, w) for w in range(6)]
    f1 = (cyc("00011") - cyc("00101")) / sqrt(2)
    f2 = (cyc("00111") - cyc("01011")) / sqrt(2)
    zero = alpha * dicke[0] + beta * dicke[4] + gamma * dicke[2] + delta * f1
    one = alpha * dicke[5] + beta * dicke[1] + gamma * dicke[3] + delta * f2
    return [zero, one]


C522 = FamilyEntry(
    id="c522",
    n=5,
    K=2,
    family_factory=weight_bounded_52,
    vectors=_c522_vectors,
    predicted=lambda p: sqrt(5) * p["t"],
    parameters=(ParameterSpec("t", 0.0, C522_T_MAX, "common Z_i compression"),),
    symmetry=SymmetryGroup.CYCLIC,
    description="cyclic-invariant ((5,2,2)) codewords sweeping [0, (sqrt6-1)/sqrt5]",
)

C532_BASIS = FamilyEntry(
    id="c532_basis",
    n=5,
    K=3,
    family_factory=weight_bounded_52,
    vectors=_c532_vectors,
    predicted=lambda p: 1 / sqrt(5),
    symmetry=SymmetryGroup.CYCLIC,
    description="isolated cyclic-basis ((5,3,2)) code",
)

ASYM52_CYC = FamilyEntry(
    id="asym52_cyc",
    n=5,
    K=2,
    family_factory=asym_52,
    vectors=_asym52_cyc_vectors,
    predicted=lambda p: abs(16 * p["a0_sq"] - 1) / sqrt(10),
    parameters=(ParameterSpec("a0_sq", 1 / 16, 3 / 8, "weight of |00000>"),),
    symmetry=SymmetryGroup.CYCLIC,
    description="single-parameter cyclic family for asym(5,2)",
)

ASYM52_NONCYC = FamilyEntry(
    id="asym52_noncyc",
    n=5,
    K=2,
    family_factory=asym_52,
    vectors=_asym52_noncyc_vectors,
    predicted=lambda p: sqrt(1 + 2 * (1 - 4 * p["t"]) ** 2 + 2 * (4 * p["t"]) ** 2),
    parameters=(ParameterSpec("t", 0.0, 0.25),),
    description="non-cyclic asym(5,2) family reaching lambda* = sqrt3",
)

MIX52 = FamilyEntry(
    id="mix52",
    n=5,
    K=2,
    family_factory=mix_5,
    vectors=_mix52_vectors,
    predicted=lambda p: sqrt(2.5 * p["x"] ** 2 / (1 + p["x"])),
    parameters=(ParameterSpec("x", 0.0, 1.0),),
    symmetry=SymmetryGroup.CYCLIC,
    description="cyclic family for the 55-member mixed two-body set",
)

ENTRIES = [C522, C532_BASIS, ASYM52_CYC, ASYM52_NONCYC, MIX52]
