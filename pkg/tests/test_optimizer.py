"""Test the frame optimizer and the spectrum engine."""
import numpy as np
import pytest

from src.models.run import RunAction
from src.models.search import Branch, Objective, OptimizerConfig, Problem, SearchMode, SpectrumShape, UnreachedTarget
from src.quantum.pauli import family_from_labels
from src.services.frame_optimizer import seeded_generator
from src.services.run_logger import RunLogger
from src.services.spectrum_engine import (
    UNION_BRANCH,
    BranchGrid,
    GridScan,
    SpectrumEngine,
    classify_shape,
    dedupe,
)


def _problem(labels, K=2, mode=SearchMode.UNRESTRICTED):
    return Problem(2, K, family_from_labels(labels), mode=mode)


def _unreached(tau):
    return UnreachedTarget(branch="unrestricted", target_lambda_sq=tau)


class TestSeeding:
    def test_same_tuple_same_stream(self):
        a = seeded_generator((7, 0, 2, 3, 1)).standard_normal(5)
        b = seeded_generator((7, 0, 2, 3, 1)).standard_normal(5)
        assert np.array_equal(a, b)

    def test_slots_are_independent(self):
        a = seeded_generator((7, 0, 2, 3, 1)).standard_normal(5)
        b = seeded_generator((7, 0, 2, 3, 2)).standard_normal(5)
        assert not np.allclose(a, b)


class TestClassification:
    def test_dedupe_collapses_clusters(self):
        assert dedupe([1.0, 0.0, 1.00001, 0.5], 1e-4) == [0.0, 0.5, 1.0]

    def test_empty(self):
        assert classify_shape([], [], OptimizerConfig()) is SpectrumShape.EMPTY

    def test_singleton(self):
        assert classify_shape([1.0, 1.0 + 1e-5], [], OptimizerConfig()) is SpectrumShape.SINGLETON

    def test_interval(self):
        assert classify_shape([0.0, 0.5, 1.0], [], OptimizerConfig()) is SpectrumShape.INTERVAL

    def test_disconnected_needs_values_on_both_sides(self):
        config = OptimizerConfig()
        assert classify_shape([0.0, 1.0], [_unreached(0.5)], config) is SpectrumShape.DISCONNECTED
        # an unreached target beyond every validated value does not split the spectrum
        assert classify_shape([0.0, 0.5], [_unreached(0.81)], config) is SpectrumShape.INTERVAL

    def test_unclassified_without_grid(self):
        config = OptimizerConfig(grid_points=0)
        assert classify_shape([0.0, 1.0], [], config) is SpectrumShape.UNCLASSIFIED

    def test_grid_of_one_point_rejected(self):
        with pytest.raises(ValueError):
            OptimizerConfig(grid_points=1)


class TestUnionUnreached:
    def _grid(self, label_index, targets, achieved):
        branch = Branch(SearchMode.CYCLIC_PROJECTOR, index=label_index)
        return BranchGrid(branch, np.array(targets), achieved={i: object() for i in achieved})

    def test_gap_between_branch_ranges(self, engine):
        """Test union grid targets outside every branch range are reported."""
        low = self._grid(0, [0.0, 0.2], [0, 1])
        high = self._grid(1, [0.8, 1.0], [0, 1])
        scan = GridScan([], [], [low, high], low.runs() + high.runs())
        lambdas = [np.sqrt(v) for v in (0.0, 0.2, 0.8, 1.0)]
        out = engine.union_unreached(scan, lambdas)
        assert [u.branch for u in out] == [UNION_BRANCH] * 3
        assert [u.target_lambda_sq for u in out] == pytest.approx([0.25, 0.5, 0.75])

    def test_branch_target_covered_by_other_branch(self, engine):
        first = self._grid(0, [0.0, 0.5, 1.0], [0, 2])
        second = self._grid(1, [0.4, 0.6], [0, 1])
        first.unreached[1] = _unreached(0.5)
        scan = GridScan([], [first.unreached[1]], [first, second], first.runs() + second.runs())
        assert engine.union_unreached(scan, [0.0, 1.0]) == []


@pytest.mark.slow
class TestReconstruction:
    def test_single_error_interval(self, engine):
        """Test {IX} with K=2 spans the whole interval [0, 1]."""
        result = engine.reconstruct_spectrum(_problem(["IX"]))
        assert result.shape is SpectrumShape.INTERVAL
        assert result.lambda_min == pytest.approx(0.0, abs=1e-3)
        assert result.lambda_max == pytest.approx(1.0, abs=1e-3)
        assert not result.unreached
        assert all(v.kl_residual <= engine.config.eps_kl for v in result.values)

    def test_pinned_singleton(self, engine):
        result = engine.reconstruct_spectrum(_problem(["IX", "IY", "IZ"]))
        assert result.shape is SpectrumShape.SINGLETON
        assert result.distinct == pytest.approx([1.0], abs=1e-3)

    def test_seed_determinism(self, fast_config):
        problem = _problem(["IX", "IY"])
        first = SpectrumEngine(fast_config, run_logger=RunLogger("a")).reconstruct_spectrum(problem)
        second = SpectrumEngine(fast_config, run_logger=RunLogger("b")).reconstruct_spectrum(problem)
        assert [v.lambda_star for v in first.values] == [v.lambda_star for v in second.values]
        assert [v.seed for v in first.values] == [v.seed for v in second.values]

    def test_workers_do_not_change_endpoints(self, fast_config):
        problem = _problem(["IX"])
        serial = SpectrumEngine(fast_config, run_logger=RunLogger("a")).find_endpoints(problem)
        parallel_config = fast_config.model_copy(update={"workers": 3})
        parallel = SpectrumEngine(parallel_config, run_logger=RunLogger("b")).find_endpoints(problem)
        assert [c.lambda_star for c in serial.candidates] == [c.lambda_star for c in parallel.candidates]

    def test_grid_disabled_is_unclassified(self, fast_config):
        config = fast_config.model_copy(update={"grid_points": 0})
        result = SpectrumEngine(config, run_logger=RunLogger("t")).reconstruct_spectrum(_problem(["IX"]))
        assert result.shape is SpectrumShape.UNCLASSIFIED
        assert all(b.targets_total == 0 for b in result.branches)

    def test_oversized_rank_is_empty(self, engine):
        """Test K above the invariant sector dimension gives no branch."""
        result = engine.reconstruct_spectrum(_problem(["IX"], K=4, mode=SearchMode.CYCLIC_BASIS))
        assert result.shape is SpectrumShape.EMPTY
        assert result.branches == []

    def test_candidate_seed_tuple_and_ledger(self, engine):
        problem = _problem(["IX"])
        branch = engine.branches(problem)[0]
        candidate = engine.optimize(Objective.endpoint_max(), problem, branch, seed=(7, 0, 1, 0, 0))
        assert candidate.accepted
        assert candidate.seed == (7, 0, 1, 0, 0)
        assert candidate.lambda_star == pytest.approx(1.0, abs=1e-4)
        assert engine.ledger.events_for(RunAction.CANDIDATE_VALIDATED)

    def test_projector_branches_are_enumerated(self, engine):
        problem = _problem(["IX"], mode=SearchMode.CYCLIC_PROJECTOR)
        result = engine.reconstruct_spectrum(problem)
        assert [b.allocation for b in result.branches] == [[2, 0], [1, 1]]
        assert result.lambda_min == pytest.approx(0.0, abs=1e-3)

    def test_grid_scan_reaches_every_target(self, engine):
        problem = _problem(["IX"])
        endpoints = engine.find_endpoints(problem)
        scan = engine.scan_grid(problem, endpoints)
        grid = scan.grids[0]
        assert len(grid.targets) == engine.config.grid_points
        assert sorted(grid.achieved) == list(range(engine.config.grid_points))
        assert grid.runs() == [(pytest.approx(grid.targets[0]), pytest.approx(grid.targets[-1]))]
