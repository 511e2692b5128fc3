"""Permutation-invariant families and the small-K gap constructions."""
from math import sqrt

import numpy as np

from src.families.base import FamilyEntry, ParameterSpec
from src.families.five_qubit import asym_52, flip_all, mix_5
from src.models.pauli import FamilyKind
from src.models.symmetry import SymmetryGroup
from src.quantum.codespace import ket, stabilizer_projector
from src.quantum.pauli import build_family, parse_pauli
from src.quantum.symmetry import dicke_state

PI52_C0_SQ_MIN = 1 - 5 * sqrt(7) / 16


def pi52_asym_coefficients(c0_sq: float) -> tuple[float, complex, complex]:
    """
    Dicke amplitudes (c0, c1, c2) of |0_L> = c0 D0 + c1 D2 + c2 D4.

    Moduli follow from the Z conditions; the phases solve the X/Y conditions
    2 sqrt5 c0 Re(c2) + 3|c1|^2 = 0 and Re(conj(c2) c1) = 0, taking
    Im(c2) >= 0 and c1 = i |c1| c2/|c2|.
    """
    c0 = sqrt(c0_sq)
    c1_mod = sqrt(max(0.0, 0.75 - 2 * c0_sq))
    c2_mod = sqrt(c0_sq + 0.25)
    real = -3 * c1_mod ** 2 / (2 * sqrt(5) * c0)
    c2 = complex(real, sqrt(max(0.0, c2_mod ** 2 - real ** 2)))
    c1 = 1j * c1_mod * c2 / abs(c2)
    return c0, c1, c2


def _pi52_asym_check(p) -> tuple[bool, str]:
    c0_sq = p["c0_sq"]
    if 256 * c0_sq ** 2 - 512 * c0_sq + 81 > 1e-9:
        return False, f"c0_sq={c0_sq:.6g} violates 256 c0^4 - 512 c0^2 + 81 <= 0"
    return True, ""


def _pi52_asym_vectors(p):
    c0, c1, c2 = pi52_asym_coefficients(p["c0_sq"])
    zero = c0 * dicke_state(5, 0) + c1 * dicke_state(5, 2) + c2 * dicke_state(5, 4)
    return [zero, flip_all(zero)]


def _pi52_mix_endpoint_vectors(p):
    tau = complex(2, sqrt(3)) / sqrt(7)
    zero = (
        sqrt(7) * dicke_state(5, 0)
        - sqrt(10) * tau * dicke_state(5, 2)
        + 1j * sqrt(15) * tau * dicke_state(5, 4)
    ) / sqrt(32)
    return [zero, flip_all(zero)]


def _pair(n: int, site: int) -> np.ndarray:
    """|single 1 at site> + its complement."""
    bits = ["0"] * n
    bits[site - 1] = "1"
    single = "".join(bits)
    complement = "".join("1" if b == "0" else "0" for b in single)
    return ket(n, {single: 1, complement: 1})


def _gap_4_3(p):
    return [
        ket(4, {"0101": 1, "1010": -1}) / sqrt(2),
        ket(4, {"0110": 1, "1001": -1}) / sqrt(2),
        ket(4, {"0011": 1, "1100": -1}) / sqrt(2),
    ]


def _gap_4_4(p):
    return list(stabilizer_projector([parse_pauli("XXXX"), parse_pauli("ZZZZ")]).psi.T)


def _gap_5_4(p):
    a = {site: _pair(5, site) for site in range(1, 6)}
    return [
        (a[5] - a[4]) / 2,
        (a[5] + a[4] - 2 * a[3]) / sqrt(12),
        (a[5] + a[4] + a[3] - 3 * a[2]) / sqrt(24),
        (a[5] + a[4] + a[3] + a[2] - 4 * a[1]) / sqrt(40),
    ]


def _gap_5_5(p):
    return [_pair(5, site) / sqrt(2) for site in (5, 1, 2, 3, 4)]


PI52_ASYM = FamilyEntry(
    id="pi52_asym",
    n=5,
    K=2,
    family_factory=asym_52,
    vectors=_pi52_asym_vectors,
    predicted=lambda p: sqrt(0.4) * abs(8 * p["c0_sq"] - 0.5),
    parameters=(ParameterSpec("c0_sq", PI52_C0_SQ_MIN, 3 / 8, "weight of D_{5,0}"),),
    symmetry=SymmetryGroup.PERMUTATION,
    description="permutation-invariant asym(5,2) family, bounded away from zero",
    extra_check=_pi52_asym_check,
)

PI52_MIX_ENDPOINT = FamilyEntry(
    id="pi52_mix_endpoint",
    n=5,
    K=2,
    family_factory=mix_5,
    vectors=_pi52_mix_endpoint_vectors,
    predicted=lambda p: sqrt(1.25),
    symmetry=SymmetryGroup.PERMUTATION,
    description="permutation-invariant code at the mix(5) upper endpoint",
)


def _gap_entry(n: int, K: int, vectors) -> FamilyEntry:
    return FamilyEntry(
        id=f"pi_gap_{n}_{K}",
        n=n,
        K=K,
        family_factory=lambda: build_family(FamilyKind.WEIGHT_BOUNDED, n, d=2),
        vectors=vectors,
        predicted=lambda p: 0.0,
        symmetry=SymmetryGroup.PERMUTATION,
        description=f"permutation-invariant (({n},{K},2)) code with lambda* = 0",
    )


ENTRIES = [
    PI52_ASYM,
    PI52_MIX_ENDPOINT,
    _gap_entry(4, 3, _gap_4_3),
    _gap_entry(4, 4, _gap_4_4),
    _gap_entry(5, 4, _gap_5_4),
    _gap_entry(5, 5, _gap_5_5),
]
