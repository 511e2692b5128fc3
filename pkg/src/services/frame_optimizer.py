"""Single-restart frame optimizer: Adam warmup, L-BFGS continuation, feasibility polish."""
import math
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from src.config import settings
from src.exceptions import LinearAlgebraError
from src.models.search import Candidate, Objective, OptimizerConfig, Problem
from src.quantum.codespace import validate
from src.quantum.symmetry import symmetry_residual
from src.services.branch_router import BranchSpace
from src.services.loss import FrameLoss


def seeded_generator(seed: Sequence[int]) -> np.random.Generator:
    """Counter-based generator keyed by a tuple of nonnegative integers."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(s) for s in seed])))


class FrameOptimizer:
    """Runs one seeded restart on a branch space and validates the result."""

    def __init__(self, config: Optional[OptimizerConfig] = None):
        self.config = config or OptimizerConfig()

    def _retract(self, space: BranchSpace, x: np.ndarray) -> np.ndarray:
        try:
            return space.pack(space.normalize(space.unpack(x)))
        except LinearAlgebraError:
            return x

    def _adam(self, loss: FrameLoss, space: BranchSpace, x: np.ndarray) -> tuple[np.ndarray, int]:
        """
        Adam steps with a cosine schedule restarted ``cosine_cycles`` times.

        Blocks are mapped back to isometries after every step.
        """
        cfg = self.config
        m = np.zeros_like(x)
        v = np.zeros_like(x)
        cycle = max(1, math.ceil(cfg.adam_steps / cfg.cosine_cycles))
        for step in range(cfg.adam_steps):
            _, g = loss.fun(x)
            m = cfg.adam_beta1 * m + (1 - cfg.adam_beta1) * g
            v = cfg.adam_beta2 * v + (1 - cfg.adam_beta2) * g * g
            m_hat = m / (1 - cfg.adam_beta1 ** (step + 1))
            v_hat = v / (1 - cfg.adam_beta2 ** (step + 1))
            rate = cfg.adam_step_size * 0.5 * (1 + math.cos(math.pi * (step % cycle) / cycle))
            x = self._retract(space, x - rate * m_hat / (np.sqrt(v_hat) + 1e-12))
        return x, cfg.adam_steps

    def _lbfgs(self, loss: FrameLoss, space: BranchSpace, x: np.ndarray, iterations: int) -> tuple[np.ndarray, int]:
        if iterations <= 0:
            return x, 0
        result = minimize(
            loss.fun,
            x,
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": iterations, "ftol": 1e-16, "gtol": 1e-12},
        )
        return self._retract(space, result.x), int(result.nit)

    def _feasible(self, loss: FrameLoss, x: np.ndarray, soft: bool) -> bool:
        try:
            terms = loss.terms_at(x)
        except LinearAlgebraError:
            return False
        return terms.kl <= self.config.eps_kl and (not soft or terms.sym <= self.config.eps_sym)

    def run(
        self,
        problem: Problem,
        space: BranchSpace,
        objective: Objective,
        seed: Sequence[int],
        init: Optional[Sequence[np.ndarray]] = None,
    ) -> Candidate:
        """
        One restart from a seeded Gaussian (or a supplied warm start).

        Args:
            problem: Detection problem
            space: Reduced search space of the branch
            objective: Signature objective
            seed: Seed tuple fed to SeedSequence
            init: Optional parameter blocks to start from

        Returns:
            Candidate: Independently validated optimizer output
        """
        cfg = self.config
        seed = tuple(int(s) for s in seed)
        blocks = list(init) if init is not None else space.random_blocks(seeded_generator(seed))
        x = self._retract(space, space.pack(blocks))
        soft = bool(space.penalty_generators)
        mu_sym_ratio = cfg.effective_mu_sym / cfg.mu

        mu = cfg.mu
        iterations = 0
        first = init is None
        while True:
            loss = FrameLoss(space, objective, mu, mu * mu_sym_ratio)
            if first and cfg.adam_steps:
                x, used = self._adam(loss, space, x)
                iterations += used
            first = False
            x, used = self._lbfgs(loss, space, x, cfg.lbfgs_iterations)
            iterations += used
            if self._feasible(loss, x, soft) or mu >= cfg.mu_max:
                break
            mu = min(mu * cfg.mu_growth, cfg.mu_max)

        if cfg.polish_iterations:
            polish = FrameLoss(space, Objective.feasibility(), 1.0, 1.0)
            polished, used = self._lbfgs(polish, space, x, cfg.polish_iterations)
            iterations += used
            try:
                before, after = polish.terms_at(x), polish.terms_at(polished)
                if after.value <= before.value:
                    x = polished
            except LinearAlgebraError:
                pass

        loss = FrameLoss(space, objective, mu, mu * mu_sym_ratio)
        return self.validate_candidate(problem, space, objective, x, seed, iterations, loss)

    def validate_candidate(
        self,
        problem: Problem,
        space: BranchSpace,
        objective: Objective,
        x: np.ndarray,
        seed: tuple[int, ...],
        iterations: int,
        loss: FrameLoss,
    ) -> Candidate:
        """Recompute residuals and the signature directly on the ambient frame."""
        cfg = self.config
        blocks = space.unpack(x)
        try:
            frame = space.frame(blocks)
            terms = loss.terms_at(x)
        except LinearAlgebraError as exc:
            return Candidate(
                branch=space.branch, objective=objective, frame=None, loss=math.inf,
                kl_residual=math.inf, sym_residual=math.inf, lambdas=[], lambda_star=math.nan,
                seed=seed, iterations=iterations, accepted=False, mu_final=loss.mu,
                rejection=str(exc), parameters=blocks,
            )

        report = validate(frame, problem.family, eps_kl=cfg.eps_kl, tuple_=problem.tuple_)
        sym = symmetry_residual(frame, space.check_generators) if space.check_generators else 0.0
        drift = abs(math.sqrt(max(terms.lambda_sq, 0.0)) - report.lambda_star)

        reasons = []
        if report.kl_residual > cfg.eps_kl:
            reasons.append(f"kl residual {report.kl_residual:.3e} above {cfg.eps_kl:.1e}")
        if report.orthonormality_error > settings.orthonormality_tol:
            reasons.append(f"orthonormality error {report.orthonormality_error:.3e}")
        if sym > cfg.eps_sym:
            reasons.append(f"symmetry residual {sym:.3e} above {cfg.eps_sym:.1e}")
        if drift > settings.lambda_consistency_tol:
            reasons.append(f"lambda* mismatch {drift:.3e}")

        return Candidate(
            branch=space.branch,
            objective=objective,
            frame=frame,
            loss=terms.value,
            kl_residual=report.kl_residual,
            sym_residual=sym,
            lambdas=report.signature.lambdas,
            lambda_star=report.lambda_star,
            seed=seed,
            iterations=iterations,
            accepted=not reasons,
            mu_final=loss.mu,
            rejection="; ".join(reasons),
            parameters=blocks,
        )
