"""Branchwise spectrum reconstruction: endpoints, target grid, escalation, classification."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from src.exceptions import ConfigError
from src.models.run import RunAction
from src.models.search import (
    Branch,
    BranchSummary,
    Candidate,
    Objective,
    OptimizerConfig,
    Problem,
    SpectrumResult,
    SpectrumShape,
    UnreachedTarget,
    ValidatedValue,
)
from src.services.branch_router import BranchRouter, BranchSpace
from src.services.frame_optimizer import FrameOptimizer
from src.services.run_logger import RunLogger

# Seed-tuple slot identifying the objective of a restart.
OBJECTIVE_CODES = {"endpoint_min": 0, "endpoint_max": 1, "target": 2, "escalation": 3}

UNION_BRANCH = "union"


class Endpoints(NamedTuple):
    lambda_min: Optional[float]
    lambda_max: Optional[float]
    candidates: List[Candidate]
    by_branch: Dict[str, List[Candidate]]
    rejected: int = 0


@dataclass
class BranchGrid:
    """Target grid of one branch and its outcome per grid index."""

    branch: Branch
    targets: np.ndarray
    achieved: Dict[int, Candidate] = field(default_factory=dict)
    unreached: Dict[int, UnreachedTarget] = field(default_factory=dict)
    extra: List[Candidate] = field(default_factory=list)

    def runs(self) -> list[tuple[float, float]]:
        """Maximal intervals between consecutive achieved grid targets."""
        out, start = [], None
        for i, target in enumerate(self.targets):
            if i in self.achieved:
                start = target if start is None else start
                end = target
            elif start is not None:
                out.append((float(start), float(end)))
                start = None
        if start is not None:
            out.append((float(start), float(end)))
        return out


class GridScan(NamedTuple):
    achieved: List[Candidate]
    unreached: List[UnreachedTarget]
    grids: List[BranchGrid]
    spans: List[tuple[float, float]]


def dedupe(values: Sequence[float], tol: float) -> list[float]:
    """Sorted values with clusters closer than ``tol`` collapsed to their first member."""
    out: list[float] = []
    for value in sorted(values):
        if not out or value - out[-1] > tol:
            out.append(float(value))
    return out


def classify_shape(
    lambdas: Sequence[float],
    unreached: Sequence[UnreachedTarget],
    config: OptimizerConfig,
) -> SpectrumShape:
    """
    Shape of the validated spectrum.

    Empty without values; unclassified when the grid is disabled; singleton
    when the validated span is below ``singleton_span``; disconnected when an
    unreached target has validated lambda*^2 on both sides; interval otherwise.
    """
    if not lambdas:
        return SpectrumShape.EMPTY
    if not config.grid_enabled:
        return SpectrumShape.UNCLASSIFIED
    if max(lambdas) - min(lambdas) < config.singleton_span:
        return SpectrumShape.SINGLETON
    squares = [value ** 2 for value in lambdas]
    for target in unreached:
        tau = target.target_lambda_sq
        below = any(s < tau - config.target_tol for s in squares)
        above = any(s > tau + config.target_tol for s in squares)
        if below and above:
            return SpectrumShape.DISCONNECTED
    return SpectrumShape.INTERVAL


class SpectrumEngine:
    """Engine for reconstructing signature spectra branch by branch."""

    def __init__(
        self,
        config: Optional[OptimizerConfig] = None,
        router: Optional[BranchRouter] = None,
        run_logger: Optional[RunLogger] = None,
    ):
        """Initialize spectrum engine."""
        self.config = config or OptimizerConfig()
        self.router = router or BranchRouter()
        self.ledger = run_logger or RunLogger()
        self.optimizer = FrameOptimizer(self.config)
        self._spaces: Dict[tuple, BranchSpace] = {}

    def branches(self, problem: Problem) -> List[Branch]:
        ok, message = problem.validate()
        if not ok:
            raise ConfigError(message)
        return self.router.route(problem, self.config)

    def space(self, problem: Problem, branch: Branch) -> BranchSpace:
        key = (problem, branch)
        if key not in self._spaces:
            self._spaces[key] = self.router.space(problem, branch)
        return self._spaces[key]

    def optimize(
        self,
        objective: Objective,
        problem: Problem,
        branch: Branch,
        seed: Optional[Sequence[int]] = None,
        init: Optional[Sequence[np.ndarray]] = None,
    ) -> Candidate:
        """
        Run one restart and record its validation outcome.

        Args:
            objective: Signature objective
            problem: Detection problem
            branch: Branch from ``branches``
            seed: Seed tuple, defaults to (config.seed,)
            init: Optional warm-start parameter blocks

        Returns:
            Candidate: Validated or rejected optimizer output
        """
        seed = tuple(seed) if seed is not None else (self.config.seed,)
        candidate = self.optimizer.run(problem, self.space(problem, branch), objective, seed, init)
        if candidate.accepted:
            self.ledger.log_candidate_validated(
                branch.label, objective.label, candidate.lambda_star, candidate.kl_residual
            )
        else:
            self.ledger.log_candidate_rejected(branch.label, objective.label, candidate.rejection)
        return candidate

    def _restarts(
        self,
        problem: Problem,
        branch: Branch,
        objective: Objective,
        code: int,
        target_index: int,
        count: int,
        stop: Optional[Callable[[Candidate], bool]] = None,
        init: Optional[Sequence[np.ndarray]] = None,
    ) -> List[Candidate]:
        """Seeded restarts in submission order, truncated at the first ``stop`` success."""
        seeds = [(self.config.seed, branch.index, code, target_index, r) for r in range(count)]
        inits = [init] + [None] * (count - 1)
        workers = max(1, self.config.workers)
        results: List[Candidate] = []

        if workers == 1:
            for seed, start in zip(seeds, inits):
                candidate = self.optimize(objective, problem, branch, seed, start)
                results.append(candidate)
                if stop is not None and stop(candidate):
                    break
            return results

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for offset in range(0, count, workers):
                batch = list(zip(seeds[offset:offset + workers], inits[offset:offset + workers]))
                futures = [pool.submit(self.optimize, objective, problem, branch, s, i) for s, i in batch]
                for future in futures:
                    candidate = future.result()
                    results.append(candidate)
                    if stop is not None and stop(candidate):
                        return results
        return results

    def find_endpoints(self, problem: Problem, branches: Optional[Sequence[Branch]] = None) -> Endpoints:
        """
        Minimize and maximize lambda*^2 on every branch.

        Returns:
            Endpoints: Best validated lower/upper lambda* and all accepted candidates
        """
        branches = self.branches(problem) if branches is None else list(branches)
        accepted: List[Candidate] = []
        by_branch: Dict[str, List[Candidate]] = {}
        rejected = 0
        for branch in branches:
            self.ledger.log_branch_started(problem.label, branch.label, self.space(problem, branch).dim)
            found = []
            for objective in (Objective.endpoint_min(), Objective.endpoint_max()):
                code = OBJECTIVE_CODES[objective.kind.value]
                for candidate in self._restarts(problem, branch, objective, code, 0, self.config.restarts):
                    if candidate.accepted:
                        found.append(candidate)
                    else:
                        rejected += 1
            by_branch[branch.label] = found
            accepted.extend(found)

        if not accepted:
            return Endpoints(None, None, [], by_branch, rejected)
        values = [c.lambda_star for c in accepted]
        return Endpoints(min(values), max(values), accepted, by_branch, rejected)

    def _target_hit(self, candidate: Candidate, tau: float) -> bool:
        return candidate.accepted and abs(candidate.lambda_sq - tau) <= self.config.target_tol

    def _stopper(self, tau: float) -> Optional[Callable[[Candidate], bool]]:
        if not self.config.stop_on_success:
            return None
        return lambda c: self._target_hit(c, tau)

    def _scan_branch(self, problem: Problem, branch: Branch, found: List[Candidate]) -> BranchGrid:
        cfg = self.config
        squares = [c.lambda_sq for c in found]
        lo, hi = min(squares), max(squares)
        if hi - lo <= cfg.target_tol:
            return BranchGrid(branch, np.array([lo]), achieved={0: found[0]})

        grid = BranchGrid(branch, np.linspace(lo, hi, cfg.grid_points))
        order = range(len(grid.targets))
        if cfg.grid_order == "descending":
            order = reversed(order)
        for i in order:
            tau = float(grid.targets[i])
            reuse = [c for c in found if self._target_hit(c, tau)]
            if reuse:
                grid.achieved[i] = min(reuse, key=lambda c: abs(c.lambda_sq - tau))
                continue
            warm = min(found, key=lambda c: abs(c.lambda_sq - tau))
            candidates = self._restarts(
                problem, branch, Objective.at_target(tau), OBJECTIVE_CODES["target"], i,
                cfg.restarts, stop=self._stopper(tau), init=warm.parameters,
            )
            self._settle(grid, i, tau, candidates, found, cfg.restarts)
        return grid

    def _settle(
        self,
        grid: BranchGrid,
        i: int,
        tau: float,
        candidates: List[Candidate],
        found: List[Candidate],
        restarts: int,
        escalated: bool = False,
    ) -> bool:
        hits = [c for c in candidates if self._target_hit(c, tau)]
        grid.extra.extend(c for c in candidates if c.accepted and c not in hits)
        if hits:
            grid.achieved[i] = hits[0]
            grid.unreached.pop(i, None)
            self.ledger.log(
                action=RunAction.TARGET_ACHIEVED,
                subject=grid.branch.label,
                description=f"Reached lambda*^2={tau:.6g}",
                data={"target": tau},
                level="debug",
            )
            return True
        pool = [c for c in list(found) + grid.extra + candidates if c.accepted]
        kls = [c.kl_residual for c in candidates if np.isfinite(c.kl_residual)]
        grid.unreached[i] = UnreachedTarget(
            branch=grid.branch.label,
            target_lambda_sq=tau,
            best_gap=min((abs(c.lambda_sq - tau) for c in pool), default=None),
            best_kl_residual=min(kls, default=None),
            restarts=restarts,
            escalated=escalated,
        )
        self.ledger.log_target_unreached(grid.branch.label, tau, restarts, escalated)
        return False

    def scan_grid(
        self,
        problem: Problem,
        endpoints: Endpoints,
        branches: Optional[Sequence[Branch]] = None,
    ) -> GridScan:
        """
        Scan the lambda*^2 grid between each branch's validated endpoints.

        Returns:
            GridScan: Achieved candidates, unreached targets and per-branch grids
        """
        branches = self.branches(problem) if branches is None else list(branches)
        grids = []
        for branch in branches:
            found = endpoints.by_branch.get(branch.label, [])
            if found and self.config.grid_enabled:
                grids.append(self._scan_branch(problem, branch, found))
        return self._collect(grids, endpoints)

    def _collect(self, grids: List[BranchGrid], endpoints: Endpoints) -> GridScan:
        achieved = [c for g in grids for c in g.achieved.values()] + [c for g in grids for c in g.extra]
        spans = [run for g in grids for run in g.runs()]
        return GridScan(achieved, [u for g in grids for u in g.unreached.values()], grids, spans)

    def union_unreached(self, scan: GridScan, lambdas: Sequence[float]) -> List[UnreachedTarget]:
        """
        Unreached targets of the union spectrum.

        Branch targets covered by another branch's achieved run (or any
        validated value) are dropped; union grid targets outside every
        branch range are added.
        """
        tol = self.config.target_tol
        squares = [v ** 2 for v in lambdas]
        spans = list(scan.spans) + [(s, s) for s in squares]

        def covered(tau: float) -> bool:
            return any(a - tol <= tau <= b + tol for a, b in spans)

        out = [u for u in scan.unreached if not covered(u.target_lambda_sq)]
        ranges = [(float(g.targets.min()), float(g.targets.max())) for g in scan.grids]
        if squares and len(ranges) > 1 and self.config.grid_enabled:
            for tau in np.linspace(min(squares), max(squares), self.config.grid_points):
                tau = float(tau)
                if covered(tau) or any(a - tol <= tau <= b + tol for a, b in ranges):
                    continue
                out.append(UnreachedTarget(
                    branch=UNION_BRANCH,
                    target_lambda_sq=tau,
                    best_gap=min(abs(s - tau) for s in squares),
                ))
        return out

    def _escalate(self, problem: Problem, scan: GridScan, endpoints: Endpoints, lambdas: Sequence[float]) -> GridScan:
        """Second pass with doubled restarts on interior unreached targets."""
        cfg = self.config
        pending = {(u.branch, u.target_lambda_sq) for u in self.union_unreached(scan, lambdas)}
        squares = [v ** 2 for v in lambdas]
        for grid in scan.grids:
            found = endpoints.by_branch.get(grid.branch.label, [])
            for i, target in sorted(grid.unreached.items()):
                tau = target.target_lambda_sq
                if (grid.branch.label, tau) not in pending:
                    continue
                if not (any(s < tau - cfg.target_tol for s in squares) and any(s > tau + cfg.target_tol for s in squares)):
                    continue
                candidates = self._restarts(
                    problem, grid.branch, Objective.at_target(tau), OBJECTIVE_CODES["escalation"], i,
                    2 * cfg.restarts, stop=self._stopper(tau),
                )
                self._settle(grid, i, tau, candidates, found, 3 * cfg.restarts, escalated=True)
        return self._collect(scan.grids, endpoints)

    def reconstruct_spectrum(self, problem: Problem) -> SpectrumResult:
        """
        Enumerate branches, search endpoints, scan the grid and classify.

        Args:
            problem: Detection problem with its search mode

        Returns:
            SpectrumResult: Validated values with provenance and shape
        """
        cfg = self.config
        branches = self.branches(problem)
        self.ledger.log_spectrum_started(problem.label, len(branches))

        endpoints = self.find_endpoints(problem, branches)
        validated = list(endpoints.candidates)
        grids: List[BranchGrid] = []
        unreached: List[UnreachedTarget] = []
        if cfg.grid_enabled and validated:
            scan = self.scan_grid(problem, endpoints, branches)
            lambdas = [c.lambda_star for c in validated + scan.achieved]
            if cfg.escalate_unreached:
                scan = self._escalate(problem, scan, endpoints, lambdas)
            validated = self._unique(validated + scan.achieved)
            unreached = self.union_unreached(scan, [c.lambda_star for c in validated])
            grids = scan.grids

        lambdas = [c.lambda_star for c in validated]
        shape = classify_shape(lambdas, unreached, cfg)
        result = SpectrumResult(
            problem=problem.label,
            mode=problem.mode,
            values=[ValidatedValue.from_candidate(c) for c in validated],
            distinct=dedupe(lambdas, cfg.dedup_tol),
            lambda_min=min(lambdas) if lambdas else None,
            lambda_max=max(lambdas) if lambdas else None,
            unreached=unreached,
            branches=self._summaries(branches, validated, grids),
            shape=shape,
            candidates=validated,
        )
        self.ledger.log_spectrum_classified(problem.label, shape.value, result.lambda_min, result.lambda_max)
        return result

    @staticmethod
    def _unique(candidates: List[Candidate]) -> List[Candidate]:
        seen, out = set(), []
        for candidate in candidates:
            if id(candidate) not in seen:
                seen.add(id(candidate))
                out.append(candidate)
        return out

    @staticmethod
    def _summaries(branches, validated, grids) -> List[BranchSummary]:
        grid_by_label = {g.branch.label: g for g in grids}
        out = []
        for branch in branches:
            values = [c.lambda_star for c in validated if c.branch.label == branch.label]
            grid = grid_by_label.get(branch.label)
            out.append(BranchSummary(
                label=branch.label,
                allocation=branch.allocation.as_list() if branch.allocation else None,
                lambda_min=min(values) if values else None,
                lambda_max=max(values) if values else None,
                validated=len(values),
                targets_total=len(grid.targets) if grid is not None else 0,
                targets_achieved=len(grid.achieved) if grid is not None else 0,
            ))
        return out


def optimize(
    objective: Objective,
    problem: Problem,
    branch: Branch,
    config: Optional[OptimizerConfig] = None,
    seed: Optional[Sequence[int]] = None,
) -> Candidate:
    return SpectrumEngine(config).optimize(objective, problem, branch, seed)


def find_endpoints(problem: Problem, config: Optional[OptimizerConfig] = None,
                   branches: Optional[Sequence[Branch]] = None) -> Endpoints:
    return SpectrumEngine(config).find_endpoints(problem, branches)


def scan_grid(problem: Problem, config: Optional[OptimizerConfig], endpoints: Endpoints,
              branches: Optional[Sequence[Branch]] = None) -> GridScan:
    return SpectrumEngine(config).scan_grid(problem, endpoints, branches)


def reconstruct_spectrum(problem: Problem, config: Optional[OptimizerConfig] = None) -> SpectrumResult:
    """Convenience wrapper running a fresh engine."""
    return SpectrumEngine(config).reconstruct_spectrum(problem)
