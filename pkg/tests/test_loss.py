"""Test penalized losses and analytic gradients."""
from math import sqrt

import numpy as np
import pytest

from src.exceptions import DimensionError
from src.families import build, get_entry
from src.families.three_qubit import disconnected_family, e2_family
from src.models.search import Branch, Objective, Problem, SearchMode
from src.quantum.numerics import complex_gaussian, projector_distance, random_isometry
from src.quantum.pauli import build_family, family_from_labels
from src.quantum.symmetry import cyclic_sector_basis
from src.services.branch_router import BranchRouter
from src.services.loss import FrameLoss, evaluate_loss, gradient

OBJECTIVES = [
    Objective.endpoint_min(),
    Objective.endpoint_max(),
    Objective.at_target(0.4),
    Objective.feasibility(),
]

PROBLEMS = [
    Problem(2, 2, family_from_labels(["IX", "IY", "XZ", "YZ"])),
    Problem(3, 2, disconnected_family(), mode=SearchMode.CYCLIC_BASIS),
    Problem(3, 2, e2_family(), mode=SearchMode.CYCLIC_PROJECTOR),
    Problem(3, 2, disconnected_family(), mode=SearchMode.PI_BASIS),
    Problem(4, 2, build_family("weight_bounded", 4, d=2), mode=SearchMode.PI_PROJECTOR),
    Problem(3, 2, e2_family(), mode=SearchMode.SOFT_PENALTY),
    Problem(5, 2, build_family("weight_bounded", 5, d=2)),
]


def _spaces():
    router = BranchRouter()
    for problem in PROBLEMS:
        for branch in router.route(problem):
            yield problem, router.space(problem, branch)


SPACES = list(_spaces())


FD_STEP = 1e-6


def _finite_difference(fun, x, h=FD_STEP):
    grad = np.zeros_like(x)
    for k in range(x.size):
        step = np.zeros_like(x)
        step[k] = h
        grad[k] = (fun(x + step) - fun(x - step)) / (2 * h)
    return grad


@pytest.mark.parametrize("index", range(len(SPACES)))
@pytest.mark.parametrize("objective", OBJECTIVES, ids=lambda o: o.label)
def test_gradient_matches_finite_differences(index, objective):
    """Test the analytic gradient against central differences on a random point."""
    problem, space = SPACES[index]
    rng = np.random.Generator(np.random.Philox(index))
    loss = FrameLoss(space, objective, mu=3.0, mu_sym=2.0)
    x = space.pack(space.random_blocks(rng))
    value, analytic = loss.fun(x)
    numeric = _finite_difference(lambda y: loss.fun(y)[0], x, h=FD_STEP)
    # central differences carry roundoff of order eps * |loss| / h per coordinate
    floor = FD_STEP * max(1.0, abs(value))
    assert np.linalg.norm(analytic - numeric) <= 1e-5 * np.linalg.norm(numeric) + floor
    # P is invariant under theta -> c * theta
    assert abs(np.dot(analytic, x)) <= 1e-8 * max(1.0, np.linalg.norm(analytic) * np.linalg.norm(x))


def test_exact_code_at_its_own_target_has_zero_loss():
    frame = build("n3_E2", {"u": 0.5, "v": 0.5})
    lambda_sq = 2 * 0.25 + 2 * 0.25 - 0.0625
    problem = Problem(3, 2, e2_family())
    value = evaluate_loss(Objective.at_target(lambda_sq), problem, Branch(SearchMode.UNRESTRICTED), frame.psi)
    assert abs(value) < 1e-12


def test_stabilizer_endpoint_max_loss():
    """Test the GHZ code gives -lambda*^2 = -3 under the maximization objective."""
    frame = build("stab_S2_max")
    problem = Problem(3, 2, e2_family())
    value = evaluate_loss(Objective.endpoint_max(), problem, Branch(SearchMode.UNRESTRICTED), frame.psi)
    assert value == pytest.approx(-3.0, abs=1e-12)


def test_loss_right_unitary_invariant(rng):
    problem = Problem(3, 2, disconnected_family())
    branch = Branch(SearchMode.UNRESTRICTED)
    theta = complex_gaussian(rng, (8, 2))
    unitary = random_isometry(2, 2, rng)
    for objective in OBJECTIVES:
        a = evaluate_loss(objective, problem, branch, theta)
        b = evaluate_loss(objective, problem, branch, theta @ unitary)
        assert a == pytest.approx(b, rel=1e-10, abs=1e-12)


def test_gradient_vanishes_at_exact_minimizer():
    frame = build("stab_S2_min")
    problem = Problem(3, 2, get_entry("stab_S2_min").family())
    grad = gradient(Objective.endpoint_min(), problem, Branch(SearchMode.UNRESTRICTED), frame.psi)
    assert np.linalg.norm(grad) <= 1e-8


def test_cyclic_basis_loss_uses_sector_coordinates():
    """Test reduced and ambient evaluations agree for a sector frame."""
    problem = Problem(3, 2, disconnected_family())
    basis = cyclic_sector_basis(3, 0).basis
    reduced = random_isometry(4, 2, np.random.Generator(np.random.Philox(5)))
    for objective in OBJECTIVES[:3]:
        sector = evaluate_loss(objective, problem.with_mode(SearchMode.CYCLIC_BASIS),
                               Branch(SearchMode.CYCLIC_BASIS), reduced)
        ambient = evaluate_loss(objective, problem, Branch(SearchMode.UNRESTRICTED), basis @ reduced)
        assert sector == pytest.approx(ambient, rel=1e-10, abs=1e-12)


def test_degenerate_theta_gets_large_finite_value():
    problem = Problem(2, 2, family_from_labels(["IX"]))
    router = BranchRouter()
    branch = router.route(problem)[0]
    loss = FrameLoss(router.space(problem, branch), Objective.endpoint_min(), mu=1.0)
    value, grad = loss.fun(np.zeros(loss.space.n_params))
    assert value == 1e12
    assert not np.any(grad)


def test_loss_rejects_wrong_shape():
    problem = Problem(2, 2, family_from_labels(["IX"]))
    with pytest.raises(DimensionError):
        evaluate_loss(Objective.endpoint_min(), problem, Branch(SearchMode.UNRESTRICTED), np.ones((3, 2)))


def test_ghz_signature_under_loss_terms():
    problem = Problem(3, 2, e2_family())
    router = BranchRouter()
    space = router.space(problem, Branch(SearchMode.UNRESTRICTED))
    loss = FrameLoss(space, Objective.endpoint_max(), mu=1.0)
    terms, _ = loss.evaluate(build("stab_S2_max").psi)
    assert terms.kl < 1e-20
    assert sqrt(terms.lambda_sq) == pytest.approx(sqrt(3))


def test_blocks_recovered_from_assembled_frame(rng):
    problem = Problem(3, 2, e2_family(), mode=SearchMode.CYCLIC_PROJECTOR)
    router = BranchRouter()
    for branch in router.route(problem):
        space = router.space(problem, branch)
        frame = space.frame(space.random_blocks(rng))
        again = space.frame(space.blocks_from_frame(frame))
        assert projector_distance(frame.psi, again.psi) < 1e-10


def test_router_enumerates_branches():
    router = BranchRouter()
    problem = Problem(2, 2, family_from_labels(["IX"]))
    assert [b.label for b in router.route(problem.with_mode(SearchMode.CYCLIC_PROJECTOR))] == [
        "cyclic_projector[2,0]", "cyclic_projector[1,1]",
    ]
    assert router.route(Problem(2, 4, family_from_labels(["IX"]), mode=SearchMode.PI_BASIS)) == []
    assert len(router.route(problem.with_mode(SearchMode.SOFT_PENALTY))) == 1
