"""Test study helpers, expected-value tables and the study registry."""
from math import sqrt

import pytest

from src.exceptions import UnknownEntryError
from src.experiments import STUDIES, run_study
from src.experiments.expected import ExpectedSpectrum, load_table, reference_value
from src.experiments.table_four import CONTAINMENT, TABLE_MODES, contained, table_row
from src.experiments.three_qubit import cyclic_interlacing_bound, disconnected_certificate, random_study
from src.experiments.two_qubit import (
    classify_two_qubit,
    forced_code,
    forced_signature,
    set_label,
    swap_two_qubit,
    two_qubit_sets,
)
from src.models.run import RunAction
from src.models.search import Problem, SearchMode, SpectrumResult, SpectrumShape
from src.models.study import StudyInstance, StudyReport
from src.quantum.codespace import signature, validate
from src.quantum.pauli import build_family, family_from_labels


def _result(shape, distinct):
    return SpectrumResult(
        problem="p",
        mode=SearchMode.UNRESTRICTED,
        distinct=distinct,
        lambda_min=min(distinct) if distinct else None,
        lambda_max=max(distinct) if distinct else None,
        shape=shape,
    )


class TestExpectedSpectrum:
    def test_interval_match(self):
        spec = ExpectedSpectrum(shape=SpectrumShape.INTERVAL, lambda_sq=[0.0, 1.0])
        assert spec.check(_result(SpectrumShape.INTERVAL, [0.0, 0.5, 1.0]), 1e-3) == (True, "")
        assert spec.label == "[0, 1]"

    def test_shape_mismatch(self):
        spec = ExpectedSpectrum(shape=SpectrumShape.SINGLETON, lambda_sq=[1.0])
        ok, message = spec.check(_result(SpectrumShape.INTERVAL, [0.0, 1.0]), 1e-3)
        assert not ok and "shape" in message

    def test_endpoint_mismatch(self):
        spec = ExpectedSpectrum(shape=SpectrumShape.INTERVAL, lambda_sq=[0.0, 3.0])
        ok, message = spec.check(_result(SpectrumShape.INTERVAL, [0.0, 1.0]), 1e-3)
        assert not ok and "endpoints" in message

    def test_disconnected_stray_value(self):
        spec = ExpectedSpectrum(shape=SpectrumShape.DISCONNECTED, lambda_sq=[0.0, 1.0])
        assert spec.check(_result(SpectrumShape.DISCONNECTED, [0.0, 1.0]), 1e-3)[0]
        assert not spec.check(_result(SpectrumShape.DISCONNECTED, [0.0, 0.5, 1.0]), 1e-3)[0]

    def test_cell_tolerance_overrides_caller(self):
        spec = ExpectedSpectrum(shape=SpectrumShape.SINGLETON, lambda_sq=[0.2], tol=1e-4)
        near = sqrt(0.2) + 5e-4
        assert not spec.check(_result(SpectrumShape.SINGLETON, [near]), 2e-2)[0]
        assert spec.check(_result(SpectrumShape.SINGLETON, [sqrt(0.2) + 5e-5]), 2e-2)[0]

    def test_empty(self):
        spec = ExpectedSpectrum(shape=SpectrumShape.EMPTY)
        assert spec.label == "empty"
        assert spec.check(_result(SpectrumShape.EMPTY, []), 1e-3)[0]


class TestTables:
    def test_two_qubit_group_sizes(self):
        sets = two_qubit_sets()
        assert len(sets) == 35
        sizes = {group: sum(1 for g, _ in sets if g == group) for group in ("interval", "zero", "one")}
        assert sizes == {"interval": 7, "zero": 13, "one": 15}

    def test_table_four_rows_cover_every_mode(self):
        data = load_table("table_four")
        assert data["modes"] == [m.value for m in TABLE_MODES]
        assert all(len(row["cells"]) == len(TABLE_MODES) for row in data["rows"])

    def test_table_four_tolerances(self):
        rows = {row["id"]: row for row in load_table("table_four")["rows"]}
        assert rows["asym52_K2"]["tolerance"] == 1e-3
        assert rows["mix5_K2"]["tolerance"] == 1e-3
        assert rows["wb52_K3"]["cells"][1]["tol"] == 1e-4
        assert rows["wb52_K2"]["cells"][1]["lambda_sq"][1] == pytest.approx((7 - 2 * sqrt(6)) / 5)
        assert "tolerance" not in rows["wb42_K2"]

    def test_reference_values(self):
        assert reference_value("pi52_asym_lambda_sq_min") == pytest.approx(0.313730334031)
        assert reference_value("c532_cyclic_basis_lambda") == pytest.approx(1 / sqrt(5))
        with pytest.raises(UnknownEntryError):
            reference_value("missing")

    def test_unknown_table(self):
        with pytest.raises(UnknownEntryError):
            load_table("no_such_table")


class TestSwapPrescreen:
    def test_single_site_forced_to_zero(self):
        assert forced_signature(family_from_labels(["IX", "IY"])) == pytest.approx([0.0, 0.0], abs=1e-12)

    def test_parity_forced_to_one(self):
        assert forced_signature(family_from_labels(["ZZ"])) == pytest.approx([1.0], abs=1e-12)

    def test_set_label(self):
        assert set_label(["IX", "IY"]) == "{IX,IY}"

    def test_forced_code_realizes_forced_scalars(self):
        family = family_from_labels(["IX", "IY"])
        code = forced_code(family, forced_signature(family))
        assert validate(code, family).accepted
        assert signature(code, family).lambda_star == pytest.approx(0.0, abs=1e-9)

    def test_incompatible_forced_eigenspaces_certify_empty(self):
        """Test X, Y and Z on one site cannot all vanish on a symmetric rank-2 code."""
        family = family_from_labels(["IX", "IY", "IZ"])
        forced = forced_signature(family)
        assert forced == pytest.approx([0.0, 0.0, 0.0], abs=1e-12)
        assert forced_code(family, forced) is None


def test_cyclic_interlacing_bound():
    worst, bound = cyclic_interlacing_bound(directions=50, seed=3)
    assert worst <= 1 / 3 + 1e-9
    assert bound == pytest.approx(sqrt(3) * worst)
    assert bound <= 1 / sqrt(3) + 1e-9


def test_contained():
    assert contained([0.1, 0.2], [0.0, 0.3], 1e-4)
    assert contained([], [], 1e-4)
    assert not contained([0.5], [], 1e-4)
    assert not contained([0.31], [0.0, 0.3], 1e-4)
    assert (SearchMode.CYCLIC_BASIS, SearchMode.CYCLIC_PROJECTOR) in CONTAINMENT


def test_table_row_rejects_large_n():
    with pytest.raises(ValueError):
        table_row(6, 2, family_from_labels(["XIIIII"]))


def test_registry_and_unknown_study():
    assert set(STUDIES) == {
        "classify-2q", "swap-2q", "random-unrestricted", "random-cyclic",
        "table-i-ii", "table-iii", "table-iv", "disconnected",
    }
    with pytest.raises(UnknownEntryError):
        run_study("table-ix")


def test_random_study_rejects_empty_count(engine):
    with pytest.raises(ValueError):
        random_study(count=0, engine=engine)


def test_random_study_cycles_tuple_sizes(engine, mocker):
    """Test unrestricted tuples cover sizes 6-8 and cyclic tuples cover 5-6."""
    mocker.patch.object(
        engine, "reconstruct_spectrum", return_value=_result(SpectrumShape.INTERVAL, [0.0, sqrt(2)])
    )
    unrestricted = random_study(count=3, seed=5, engine=engine)
    assert [i.details["m"] for i in unrestricted.instances] == [6, 7, 8]
    assert [len(i.name.split(",")) for i in unrestricted.instances] == [6, 7, 8]
    assert all(i.passed for i in unrestricted.instances)

    cyclic = random_study(count=4, seed=5, mode=SearchMode.CYCLIC_BASIS, engine=engine)
    assert [i.details["m"] for i in cyclic.instances] == [5, 6, 5, 6]
    assert cyclic.study == "random-cyclic_basis"

    fixed = random_study(count=2, m=4, seed=5, engine=engine)
    assert {i.details["m"] for i in fixed.instances} == {4}
    with pytest.raises(ValueError):
        random_study(count=1, m=[], engine=engine)


def test_report_histogram_and_pass_state():
    report = StudyReport(study="s", seed=1)
    report.add(StudyInstance(name="a", mode="unrestricted", shape=SpectrumShape.INTERVAL, passed=True))
    report.add(StudyInstance(name="b", mode="unrestricted", shape=SpectrumShape.EMPTY))
    assert report.histogram["interval"] == 1
    assert report.histogram["empty"] == 1
    assert report.passed
    report.checks["extra"] = False
    assert not report.passed
    assert report.summary()["instances"] == 2


def test_classify_two_qubit_bookkeeping(engine, mocker):
    """Test every set is reconstructed once and checked against its own group."""
    stub = mocker.patch.object(
        engine, "reconstruct_spectrum", return_value=_result(SpectrumShape.INTERVAL, [0.0, 1.0])
    )
    report = classify_two_qubit(engine=engine)
    assert stub.call_count == 35
    assert len(report.instances) == 35
    assert report.checks["group_sizes"]
    by_group = {}
    for instance in report.instances:
        by_group.setdefault(instance.details["group"], []).append(instance.passed)
    assert all(by_group["interval"])
    assert not any(by_group["zero"] + by_group["one"])
    assert len(engine.ledger.events_for(RunAction.STUDY_INSTANCE)) == 35


@pytest.mark.slow
def test_disconnected_certificate(engine):
    """Test the explicit codes validate and no interior target is reached."""
    report = disconnected_certificate(engine=engine)
    assert report.checks["n3_disc_0_validates"]
    assert report.checks["n3_disc_1_validates"]
    assert report.checks["interior_unreached"]
    assert report.instances[0].mode == SearchMode.CYCLIC_BASIS.value


@pytest.mark.slow
def test_random_study_is_seeded(engine):
    first = random_study(count=2, seed=11, engine=engine)
    second = random_study(count=2, seed=11, engine=engine)
    assert [i.name for i in first.instances] == [i.name for i in second.instances]
    assert first.seed == 11


@pytest.mark.slow
def test_swap_parity_collapses_to_one(engine):
    """Test {ZZ} has the same swap-basis and swap-projector spectrum {1}."""
    swap = swap_two_qubit(["ZZ"], engine=engine)
    assert swap.forced_lambda_star == pytest.approx(1.0)
    assert swap.basis == pytest.approx([1.0], abs=1e-6)
    assert swap.agree
    assert all(swap.complement_checks)
    assert swap.forced_compatible
    assert swap.certificate.startswith("witness")


@pytest.mark.slow
def test_swap_empty_is_certified(engine):
    """Test {IX,IY,IZ} is empty in the swap sector by certificate, with no basis search."""
    started = len(engine.ledger.events_for(RunAction.SPECTRUM_STARTED))
    swap = swap_two_qubit(["IX", "IY", "IZ"], engine=engine)
    assert swap.forced_compatible is False
    assert swap.certificate.startswith("empty")
    assert swap.basis == []
    assert swap.projector == []
    assert swap.agree
    assert swap.label == "empty"
    # only the projector search runs
    assert len(engine.ledger.events_for(RunAction.SPECTRUM_STARTED)) == started + 1


@pytest.mark.slow
def test_five_three_two_projector_branch(thorough_engine):
    """Test branch (1,1,0,0,1) tops out at lambda*^2 = 0.5737 and reaches every grid target."""
    problem = Problem(
        5, 3, build_family("weight_bounded", 5, d=2),
        mode=SearchMode.CYCLIC_PROJECTOR, allocations=((1, 1, 0, 0, 1),),
    )
    result = thorough_engine.reconstruct_spectrum(problem)
    assert result.lambda_max ** 2 == pytest.approx(0.5737, abs=5e-3)
    assert result.lambda_min ** 2 <= 1e-3
    branch = next(b for b in result.branches if b.allocation == [1, 1, 0, 0, 1])
    assert branch.targets_total > 0
    assert branch.targets_achieved == branch.targets_total


@pytest.mark.slow
def test_five_three_two_cyclic_basis_singleton(thorough_engine):
    problem = Problem(5, 3, build_family("weight_bounded", 5, d=2), mode=SearchMode.CYCLIC_BASIS)
    result = thorough_engine.reconstruct_spectrum(problem)
    assert result.shape is SpectrumShape.SINGLETON
    assert result.lambda_min == pytest.approx(1 / sqrt(5), abs=1e-4)
    assert result.lambda_max == pytest.approx(1 / sqrt(5), abs=1e-4)
