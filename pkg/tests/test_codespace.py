"""Test compressions, detection residuals, signatures and stabilizer codes."""
from math import sqrt

import numpy as np
import pytest

from src.exceptions import DimensionError, StabilizerError
from src.families.three_qubit import e1_family, e2_family
from src.models.pauli import FamilyKind
from src.quantum.codespace import (
    basis_state,
    compression_matrix,
    frame_from_vectors,
    kl_residual,
    make_frame,
    signature,
    stabilizer_group,
    stabilizer_projector,
    validate,
)
from src.quantum.numerics import projector_distance, random_isometry
from src.quantum.pauli import build_family, family_from_labels, parse_pauli


def _frame(n, *bits):
    return frame_from_vectors(n, [basis_state(n, b) for b in bits])


def test_even_parity_compressions():
    frame = _frame(2, "00", "11")
    assert np.allclose(compression_matrix(frame, parse_pauli("ZZ")), np.eye(2))
    assert np.allclose(compression_matrix(frame, parse_pauli("IX")), 0)


def test_z_anchored_compression():
    frame = _frame(2, "01", "11")
    assert np.allclose(compression_matrix(frame, parse_pauli("IZ")), -np.eye(2))


def test_compression_arity_mismatch():
    with pytest.raises(DimensionError):
        compression_matrix(_frame(2, "00"), parse_pauli("XXX"))


def test_kl_residual_zero_for_stabilizer():
    frame = stabilizer_projector([parse_pauli("YII"), parse_pauli("IYY")])
    assert kl_residual(frame, e1_family()) < 1e-20


def test_kl_residual_rank_one_is_scalar():
    frame = _frame(3, "000")
    assert kl_residual(frame, family_from_labels(["XII"])) < 1e-24


def test_kl_residual_direct_value():
    frame = _frame(3, "000", "001")
    assert kl_residual(frame, family_from_labels(["IIZ"])) == pytest.approx(2.0)


def test_signature_even_parity():
    sig = signature(_frame(2, "00", "11"), family_from_labels(["ZZ", "IX", "IY"]))
    assert np.allclose(sig.lambdas, [1.0, 0.0, 0.0])
    assert sig.lambda_star == pytest.approx(1.0)


def test_signature_ghz_frame():
    frame = _frame(3, "000", "111")
    assert signature(frame, e2_family()).lambda_star == pytest.approx(sqrt(3))


def test_signature_invariant_under_permutation_and_sign(rng):
    """Test lambda* ignores tuple order and member signs."""
    frame = make_frame(3, random_isometry(8, 2, rng))
    labels = ["YXX", "XXI", "YXZ", "YIX", "IZI"]
    base = signature(frame, family_from_labels(labels)).lambda_star
    shuffled = signature(frame, family_from_labels(labels[::-1])).lambda_star
    signed = signature(frame, family_from_labels(["-" + labels[0]] + labels[1:])).lambda_star
    assert abs(base - shuffled) < 1e-12
    assert abs(base - signed) < 1e-12


def test_validate_accepts_exact_code():
    report = validate(_frame(3, "000", "111"), e2_family(), eps_kl=1e-10)
    assert report.accepted
    assert report.lambda_star == pytest.approx(sqrt(3))


def test_validate_rejects_perturbed_code():
    """Test a residual of order 1e-6 fails a 1e-10 threshold."""
    ghz = [basis_state(3, "000"), basis_state(3, "111")]
    ghz[0] = ghz[0] + 1e-3 * basis_state(3, "100")
    report = validate(frame_from_vectors(3, ghz), e2_family(), eps_kl=1e-10)
    assert not report.accepted
    assert 1e-8 < report.kl_residual < 1e-4


def test_validate_rejects_nonpositive_eps():
    with pytest.raises(ValueError):
        validate(_frame(2, "00"), family_from_labels(["IX"]), eps_kl=0.0)


def test_stabilizer_group_elements():
    group = stabilizer_group([parse_pauli("XX"), parse_pauli("ZZ")])
    labels = {op.label for op in group}
    assert labels == {"II", "XX", "ZZ", "-YY"}


def test_stabilizer_group_rejects_anticommuting():
    with pytest.raises(StabilizerError):
        stabilizer_group([parse_pauli("XI"), parse_pauli("ZI")])


def test_stabilizer_group_rejects_minus_identity():
    with pytest.raises(StabilizerError):
        stabilizer_group([parse_pauli("ZI"), parse_pauli("-ZI")])


def test_stabilizer_projector_ghz():
    frame = stabilizer_projector([parse_pauli("ZZI"), parse_pauli("IZZ")])
    assert frame.K == 2
    assert projector_distance(frame.psi, _frame(3, "000", "111").psi) < 1e-10


def test_stabilizer_projector_four_qubit():
    frame = stabilizer_projector([parse_pauli("XXXX"), parse_pauli("ZZZZ")])
    family = build_family(FamilyKind.WEIGHT_BOUNDED, 4, d=2)
    report = validate(frame, family)
    assert frame.K == 4
    assert report.accepted
    assert report.lambda_star < 1e-12


def test_stabilizer_projector_empty_generators():
    assert stabilizer_projector([], n=2).K == 4
    with pytest.raises(StabilizerError):
        stabilizer_projector([])


@pytest.mark.parametrize("generators,factory", [
    (["YII", "IYY"], e1_family),
    (["XII", "IYY"], e1_family),
    (["ZZI", "IZZ"], e2_family),
])
def test_stabilizer_lambda_sq_integral(generators, factory):
    frame = stabilizer_projector([parse_pauli(g) for g in generators])
    lambda_sq = signature(frame, factory()).lambda_sq
    assert abs(lambda_sq - round(lambda_sq)) < 1e-9
