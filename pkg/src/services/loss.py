"""Penalized detection losses and their analytic gradients."""
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from src.config import settings
from src.exceptions import DimensionError, LinearAlgebraError
from src.models.search import Branch, Objective, ObjectiveKind, Problem
from src.services.branch_router import BranchRouter, BranchSpace


class LossTerms(NamedTuple):
    value: float
    kl: float
    lambda_sq: float
    sym: float
    lambdas: np.ndarray


def _inverse_gram(theta: np.ndarray) -> np.ndarray:
    gram = theta.conj().T @ theta
    values, vectors = np.linalg.eigh(0.5 * (gram + gram.conj().T))
    floor = settings.min_singular_value ** 2 * max(float(values[-1]), 0.0)
    if values[0] <= floor or not np.all(np.isfinite(values)):
        raise LinearAlgebraError("Frame parameters are rank-deficient")
    return (vectors / values) @ vectors.conj().T


def _trace(stack: np.ndarray) -> np.ndarray:
    return np.trace(stack, axis1=-2, axis2=-1)


class FrameLoss:
    """
    Loss of one objective on one branch, evaluated on the reduced frame.

    With S = (theta^H theta)^-1 the projector is theta S theta^H, so every
    term is a smooth function of theta that needs no explicit polar map.
    """

    def __init__(self, space: BranchSpace, objective: Objective, mu: float, mu_sym: Optional[float] = None):
        if mu <= 0:
            raise ValueError("mu must be positive")
        self.space = space
        self.objective = objective
        self.mu = float(mu)
        self.mu_sym = float(mu if mu_sym is None else mu_sym)
        self.K = space.K

    def _kl_part(self, theta, s, want_grad):
        ops = self.space.family_ops
        if ops.size == 0:
            return 0.0, (np.zeros_like(theta) if want_grad else None)
        f_theta = ops @ theta
        a = theta.conj().T @ f_theta
        sa = s @ a
        t = _trace(sa).real
        u = _trace(sa @ sa).real
        kl = float(np.sum(u - t ** 2 / self.K))
        if not want_grad:
            return kl, None
        sas = sa @ s
        grad_t = 2.0 * (f_theta @ s - theta @ sas)
        grad_u = 4.0 * (f_theta @ sas - theta @ (sas @ a @ s))
        grad = np.sum(grad_u - (2.0 * t / self.K)[:, None, None] * grad_t, axis=0)
        return kl, grad

    def _signature_part(self, theta, s, want_grad):
        ops = self.space.tuple_ops
        if ops.size == 0:
            return np.zeros(0), 0.0, (np.zeros_like(theta) if want_grad else None)
        f_theta = ops @ theta
        a = theta.conj().T @ f_theta
        t = _trace(s @ a).real
        lambdas = t / self.K
        lambda_sq = float(np.sum(lambdas ** 2))
        if not want_grad:
            return lambdas, lambda_sq, None
        grad_t = 2.0 * (f_theta @ s - theta @ (s @ a @ s))
        grad = np.sum((2.0 * t / self.K ** 2)[:, None, None] * grad_t, axis=0)
        return lambdas, lambda_sq, grad

    def _symmetry_part(self, theta, s, want_grad):
        generators = self.space.penalty_generators
        total = 0.0
        grad = np.zeros_like(theta) if want_grad else None
        for unitary in generators:
            u_theta = unitary @ theta
            uh_theta = unitary.conj().T @ theta
            b = theta.conj().T @ u_theta
            c = b.conj().T
            sbs, scs = s @ b @ s, s @ c @ s
            v = float(np.real(np.trace(sbs @ c)))
            total += 2.0 * (self.K - v)
            if want_grad:
                w = s @ (b @ s @ c + c @ s @ b) @ s
                grad_v = 2.0 * (u_theta @ scs + uh_theta @ sbs) - 2.0 * theta @ w
                grad -= 2.0 * grad_v
        return total, grad

    def _objective_part(self, lambda_sq, grad_sq):
        kind = self.objective.kind
        if kind is ObjectiveKind.ENDPOINT_MIN:
            return lambda_sq, grad_sq
        if kind is ObjectiveKind.ENDPOINT_MAX:
            return -lambda_sq, (None if grad_sq is None else -grad_sq)
        if kind is ObjectiveKind.TARGET:
            gap = lambda_sq - self.objective.target
            return gap ** 2, (None if grad_sq is None else 2.0 * gap * grad_sq)
        return 0.0, (None if grad_sq is None else np.zeros_like(grad_sq))

    def evaluate(self, theta: np.ndarray, want_grad: bool = False):
        """
        Loss terms and, optionally, the Wirtinger gradient in theta.

        Raises:
            LinearAlgebraError: theta is rank-deficient
        """
        theta = np.asarray(theta, dtype=complex)
        if theta.shape != (self.space.dim, self.K):
            raise DimensionError(f"theta shape {theta.shape} does not match ({self.space.dim}, {self.K})")
        s = _inverse_gram(theta)
        kl, g_kl = self._kl_part(theta, s, want_grad)
        lambdas, lambda_sq, g_sq = self._signature_part(theta, s, want_grad)
        obj, g_obj = self._objective_part(lambda_sq, g_sq)
        sym, g_sym = self._symmetry_part(theta, s, want_grad)
        value = self.mu * kl + obj + self.mu_sym * sym
        terms = LossTerms(float(value), kl, lambda_sq, sym, lambdas)
        if not want_grad:
            return terms, None
        return terms, self.mu * g_kl + g_obj + self.mu_sym * g_sym

    def fun(self, x: np.ndarray) -> tuple[float, np.ndarray]:
        """Real-vector objective for scipy; degenerate points get a large finite value."""
        try:
            terms, grad = self.evaluate(self.space.theta(self.space.unpack(x)), want_grad=True)
        except LinearAlgebraError:
            return 1e12, np.zeros_like(x)
        if not np.isfinite(terms.value):
            return 1e12, np.zeros_like(x)
        return terms.value, self.space.pack(self.space.block_gradients(grad))

    def terms_at(self, x: np.ndarray) -> LossTerms:
        return self.evaluate(self.space.theta(self.space.unpack(x)))[0]


ThetaLike = Union[np.ndarray, Sequence[np.ndarray]]


def _blocks(space: BranchSpace, theta: ThetaLike) -> list[np.ndarray]:
    if isinstance(theta, np.ndarray):
        theta = [theta]
    blocks = [np.asarray(b, dtype=complex) for b in theta]
    if len(blocks) != len(space.blocks):
        raise DimensionError(f"Branch {space.branch.label} needs {len(space.blocks)} parameter blocks")
    for spec, value in zip(space.blocks, blocks):
        if value.shape != (spec.rows, spec.cols):
            raise DimensionError(f"Block shape {value.shape} does not match ({spec.rows}, {spec.cols})")
    return blocks


def _loss(objective, problem, branch, mu, mu_sym, router) -> FrameLoss:
    space = (router or BranchRouter()).space(problem, branch)
    mu = settings.mu_initial if mu is None else mu
    return FrameLoss(space, objective, mu, mu_sym)


def evaluate_loss(
    objective: Objective,
    problem: Problem,
    branch: Branch,
    theta: ThetaLike,
    mu: Optional[float] = None,
    mu_sym: Optional[float] = None,
    router: Optional[BranchRouter] = None,
) -> float:
    """
    Penalized loss on the assembled frame of a branch.

    Args:
        objective: Endpoint, target or feasibility objective
        problem: Detection problem
        branch: Branch from BranchRouter.route
        theta: Reduced frame (single block) or list of parameter blocks
        mu: KL penalty weight, defaults to settings.mu_initial
        mu_sym: Symmetry penalty weight, defaults to mu

    Returns:
        Loss value
    """
    loss = _loss(objective, problem, branch, mu, mu_sym, router)
    return loss.evaluate(loss.space.theta(_blocks(loss.space, theta)))[0].value


def gradient(
    objective: Objective,
    problem: Problem,
    branch: Branch,
    theta: ThetaLike,
    mu: Optional[float] = None,
    mu_sym: Optional[float] = None,
    router: Optional[BranchRouter] = None,
) -> np.ndarray:
    """Gradient in the real parameters (Re, Im of each block, blocks in order)."""
    loss = _loss(objective, problem, branch, mu, mu_sym, router)
    _, grad = loss.evaluate(loss.space.theta(_blocks(loss.space, theta)), want_grad=True)
    return loss.space.pack(loss.space.block_gradients(grad))
