"""Command-line entry point."""
import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from src.config import settings
from src.exceptions import ConfigError, DomainError, OutputError, PauliError, SymmetryError, UnknownEntryError
from src.experiments import STUDIES, run_study
from src.families import catalog, get_entry, verify_grid, verify_point
from src.models.run import RunAction, RunConfig
from src.models.search import OptimizerConfig, SearchMode
from src.models.study import StudyReport
from src.services.result_writer import write_result, write_study
from src.services.run_config import apply_overrides, build_problem, load_run_config, parse_run_config
from src.services.run_logger import RunLogger, configure_logging
from src.services.spectrum_engine import SpectrumEngine

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_IO = 3

console = Console()
cli_ledger = RunLogger("cli")


def _optimizer_overrides(args: argparse.Namespace) -> dict:
    return {
        "seed": getattr(args, "seed", None),
        "restarts": getattr(args, "restarts", None),
        "grid_points": getattr(args, "grid", None),
        "workers": getattr(args, "workers", None),
    }


def _scan_config(args: argparse.Namespace) -> RunConfig:
    """Config file (or inline problem flags) with command-line overrides applied."""
    if args.config is not None:
        config = load_run_config(args.config)
    else:
        if not args.paulis or args.K is None:
            raise ConfigError("scan needs --config or both --paulis and --K")
        n = len(args.paulis[0].lstrip("+-"))
        config = parse_run_config({"problem": {"n": n, "K": args.K, "paulis": args.paulis}})
    return apply_overrides(
        config,
        problem={"mode": args.mode},
        optimizer=_optimizer_overrides(args),
        output=str(args.out) if args.out is not None else None,
        format=args.format,
    )


def _print_spectrum(result) -> None:
    table = Table(title=result.problem)
    table.add_column("Branch", style="cyan")
    table.add_column("lambda_min", justify="right")
    table.add_column("lambda_max", justify="right")
    table.add_column("Validated", justify="right")
    table.add_column("Targets", justify="right")
    for branch in result.branches:
        table.add_row(
            branch.label,
            "-" if branch.lambda_min is None else f"{branch.lambda_min:.6f}",
            "-" if branch.lambda_max is None else f"{branch.lambda_max:.6f}",
            str(branch.validated),
            f"{branch.targets_achieved}/{branch.targets_total}",
        )
    console.print(table)
    console.print(f"shape: [bold]{result.shape.value}[/bold]  distinct: {[round(v, 6) for v in result.distinct]}")
    if result.unreached:
        console.print(f"[yellow]{len(result.unreached)} unreached targets (numerical evidence only)[/yellow]")


def cmd_scan(args: argparse.Namespace) -> int:
    """Reconstruct one spectrum and persist it with its config snapshot."""
    config = _scan_config(args)
    problem = build_problem(config.problem)
    engine = SpectrumEngine(config.optimizer)
    result = engine.reconstruct_spectrum(problem)
    _print_spectrum(result)

    if config.output is not None:
        path = write_result(result, config.snapshot(), config.output, config.format)
        engine.ledger.log(RunAction.OUTPUT_WRITTEN, str(path), data={"format": config.format})
        console.print(f"[green]✓[/green] Result written to {path}")
    return EXIT_OK


def _parse_params(items: Optional[Sequence[str]]) -> Optional[dict]:
    if not items:
        return None
    params = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"Parameter must be name=value, got {item!r}")
        try:
            params[name.strip()] = float(value)
        except ValueError as exc:
            raise ConfigError(f"Parameter {name} is not a number: {value!r}") from exc
    return params


def cmd_verify(args: argparse.Namespace) -> int:
    """Oracle-consistency grid (or a single point) for a catalog family."""
    ledger = RunLogger("oracle")
    entry = get_entry(args.family_id)
    params = _parse_params(args.param)
    try:
        checks = [verify_point(entry, params)] if params is not None else verify_grid(entry.id, args.points)
    except DomainError as exc:
        ledger.log(RunAction.FAMILY_VIOLATION, entry.id, str(exc), level="error")
        console.print(f"[red]✗[/red] Domain error: {exc}")
        return EXIT_FAILED

    failures = [c for c in checks if not c.passed]
    for check in failures:
        ledger.log(RunAction.FAMILY_VIOLATION, entry.id, check.message, data=check.params, level="error")
        console.print(f"[red]✗[/red] {entry.id} at {check.params}: {check.message}")
    if failures:
        return EXIT_FAILED
    worst = max(abs(c.measured - c.predicted) for c in checks)
    ledger.log(RunAction.FAMILY_VERIFIED, entry.id, data={"points": len(checks), "worst_gap": worst})
    console.print(f"[green]✓[/green] {entry.id}: {len(checks)} points pass (worst lambda* gap {worst:.2e})")
    return EXIT_OK


def _print_report(report: StudyReport) -> None:
    table = Table(title=f"Study {report.study} (seed {report.seed})")
    table.add_column("Instance", style="cyan")
    table.add_column("Mode")
    table.add_column("Shape")
    table.add_column("Expected")
    table.add_column("Result")
    for instance in report.instances:
        mark = {True: "[green]pass[/green]", False: "[red]fail[/red]", None: "-"}[instance.passed]
        table.add_row(instance.name, instance.mode, instance.shape.value, instance.expected or "-", mark)
    console.print(table)
    for name, ok in report.checks.items():
        console.print(f"{'[green]✓[/green]' if ok else '[red]✗[/red]'} {name}")
    console.print(f"histogram: {report.histogram}")


def cmd_study(args: argparse.Namespace) -> int:
    """Run a registered study, write its report and gate on its checks."""
    config = OptimizerConfig.from_settings(**_optimizer_overrides(args))
    ledger = RunLogger("study")
    ledger.log(RunAction.STUDY_STARTED, args.study_id, data={"seed": config.seed})
    report = run_study(args.study_id, config=config, engine=SpectrumEngine(config, run_logger=ledger))
    ledger.log(RunAction.STUDY_COMPLETED, args.study_id, data=report.summary())
    _print_report(report)

    if args.out is not None:
        path = write_study(report, args.out, args.format or settings.output_format)
        console.print(f"[green]✓[/green] Report written to {path}")
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_families(args: argparse.Namespace) -> int:
    """Print the oracle catalog."""
    table = Table(title="Oracle catalog")
    table.add_column("ID", style="cyan")
    table.add_column("n", justify="right")
    table.add_column("K", justify="right")
    table.add_column("Family", style="green")
    table.add_column("Parameters")
    table.add_column("lambda* range", justify="right")
    for entry in catalog():
        values = [entry.predicted_lambda(p) for p in entry.parameter_grid(args.points)]
        params = ", ".join(f"{p.name}∈[{p.lower:.4g},{p.upper:.4g}]" for p in entry.parameters) or "-"
        span = f"{min(values):.6f}" if max(values) - min(values) < 1e-12 else f"[{min(values):.6f}, {max(values):.6f}]"
        table.add_row(entry.id, str(entry.n), str(entry.K), entry.family().label, params, span)
    console.print(table)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Signature spectra of Pauli-error-detecting codes")
    parser.add_argument("--log-level", default=None, help="Log level (default from settings)")
    parser.add_argument("--log-format", choices=["console", "json"], default=None, help="Log line format")
    sub = parser.add_subparsers(dest="command", required=True)

    def run_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=None, help="Base seed")
        p.add_argument("--restarts", type=int, default=None, help="Restarts per objective")
        p.add_argument("--grid", type=int, default=None, help="Grid points (0 disables the scan)")
        p.add_argument("--workers", type=int, default=None, help="Parallel restart workers")
        p.add_argument("--out", type=Path, default=None, help="Output file")
        p.add_argument("--format", choices=["json", "csv"], default=None, help="Output format")

    scan = sub.add_parser("scan", help="Reconstruct one signature spectrum")
    scan.add_argument("--config", type=Path, default=None, help="JSON run config or result file")
    scan.add_argument("--paulis", nargs="+", default=None, help="Explicit family when no config is given")
    scan.add_argument("--K", type=int, default=None, help="Code rank when no config is given")
    scan.add_argument("--mode", choices=[m.value for m in SearchMode], default=None, help="Search mode")
    run_flags(scan)
    scan.set_defaults(handler=cmd_scan)

    verify = sub.add_parser("verify", help="Oracle-consistency check of a catalog family")
    verify.add_argument("family_id")
    verify.add_argument("--points", type=int, default=20, help="Parameter grid size")
    verify.add_argument("--param", action="append", default=None, metavar="NAME=VALUE",
                        help="Check a single parameter point instead of the grid")
    verify.set_defaults(handler=cmd_verify)

    study = sub.add_parser("study", help="Run a study suite")
    study.add_argument("study_id", choices=sorted(STUDIES))
    run_flags(study)
    study.set_defaults(handler=cmd_study)

    families = sub.add_parser("families", help="List the oracle catalog")
    families.add_argument("--points", type=int, default=20, help="Grid size for the lambda* range")
    families.set_defaults(handler=cmd_families)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level, args.log_format)

    try:
        return args.handler(args)
    except (ConfigError, ValidationError, UnknownEntryError, DomainError, SymmetryError, PauliError) as exc:
        cli_ledger.log_error(args.command, "config_error", exc)
        console.print(f"[red]Configuration error:[/red] {exc}")
        return EXIT_CONFIG
    except (OutputError, OSError) as exc:
        cli_ledger.log_error(args.command, "io_error", exc)
        console.print(f"[red]I/O error:[/red] {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
