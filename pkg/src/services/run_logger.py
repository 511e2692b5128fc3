"""Run ledger backed by structlog."""
import logging
import sys
from typing import Optional

import structlog

from src.config import settings
from src.models.run import RunAction, RunEvent


def configure_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> None:
    """
    Configure structlog once for the process.

    Args:
        level: Log level name, defaults to settings.log_level
        fmt: "json" for JSON lines, "console" for key/value text
    """
    level_name = (level or settings.log_level).upper()
    json_lines = settings.json_logs if fmt is None else fmt.lower() == "json"
    numeric = getattr(logging, level_name, logging.INFO)

    renderer = (
        structlog.processors.JSONRenderer(sort_keys=True)
        if json_lines
        else structlog.dev.ConsoleRenderer(colors=False)
    )
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(numeric),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )


class RunLogger:
    """Service for emitting and recording run ledger entries."""

    def __init__(self, name: str = "spectrum", logger=None):
        """Initialize run logger."""
        self.logger = logger or structlog.get_logger(name)
        self.events: list[RunEvent] = []

    def log(
        self,
        action: RunAction,
        subject: Optional[str] = None,
        description: Optional[str] = None,
        data: Optional[dict] = None,
        level: str = "info",
    ) -> RunEvent:
        """
        Create a ledger entry and emit it.

        Args:
            action: The action being logged
            subject: Problem, branch or study label
            description: Human-readable description
            data: Additional context data
            level: structlog method used for emission

        Returns:
            RunEvent: Recorded ledger entry
        """
        event = RunEvent.create_event(
            action=action,
            subject=subject,
            description=description,
            data=data or {}
        )
        self.events.append(event)
        getattr(self.logger, level)(action.value, subject=subject, description=event.description, **event.data)
        return event

    def events_for(self, action: RunAction) -> list[RunEvent]:
        return [e for e in self.events if e.action is action]

    def log_spectrum_started(self, problem: str, branches: int):
        return self.log(
            action=RunAction.SPECTRUM_STARTED,
            subject=problem,
            description=f"Reconstructing spectrum over {branches} branches",
            data={"branches": branches}
        )

    def log_branch_started(self, problem: str, branch: str, dim: int):
        """Log branch search start."""
        return self.log(
            action=RunAction.BRANCH_STARTED,
            subject=problem,
            description=f"Searching branch {branch}",
            data={"branch": branch, "dim": dim}
        )

    def log_candidate_validated(self, branch: str, objective: str, lambda_star: float, kl_residual: float):
        """Log an accepted candidate."""
        return self.log(
            action=RunAction.CANDIDATE_VALIDATED,
            subject=branch,
            description=f"Validated lambda*={lambda_star:.6g}",
            data={"objective": objective, "lambda_star": lambda_star, "kl_residual": kl_residual},
            level="debug"
        )

    def log_candidate_rejected(self, branch: str, objective: str, reason: str):
        """Log a rejected candidate."""
        return self.log(
            action=RunAction.CANDIDATE_REJECTED,
            subject=branch,
            description=reason,
            data={"objective": objective},
            level="debug"
        )

    def log_target_unreached(self, branch: str, target: float, restarts: int, escalated: bool = False):
        """Log an unreached grid target."""
        action = RunAction.TARGET_ESCALATED if escalated else RunAction.TARGET_UNREACHED
        return self.log(
            action=action,
            subject=branch,
            description=f"No validated candidate at lambda*^2={target:.6g}",
            data={"target": target, "restarts": restarts}
        )

    def log_spectrum_classified(self, problem: str, shape: str, lambda_min, lambda_max):
        """Log spectrum classification."""
        return self.log(
            action=RunAction.SPECTRUM_CLASSIFIED,
            subject=problem,
            description=f"Spectrum classified as {shape}",
            data={"shape": shape, "lambda_min": lambda_min, "lambda_max": lambda_max}
        )

    def log_study_instance(self, study: str, instance: str, shape: str, passed: Optional[bool] = None):
        """Log one study instance."""
        return self.log(
            action=RunAction.STUDY_INSTANCE,
            subject=study,
            description=f"{instance}: {shape}",
            data={"instance": instance, "shape": shape, "passed": passed}
        )

    def log_error(self, command: str, kind: str, error: Exception):
        """Log a command that ended on an error."""
        return self.log(
            action=RunAction.ERROR_OCCURRED,
            subject=command,
            description=f"{kind}: {error}",
            data={"kind": kind, "error_type": type(error).__name__},
            level="error",
        )
