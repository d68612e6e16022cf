"""Command-line interface for phase-only compressive sensing.

Verbs:
  experiment  Run a Monte Carlo success-rate sweep from a config file
  recover     Recover a signal from a sensing matrix and observed phases
  diagnose    Run an empirical probe (RIC, l1 concentration, SPE, ...)

Exit codes: 0 success, 1 usage or input error, 2 I/O error, 3 numerical failure.
"""

from __future__ import annotations

import logging
import math
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

import click
import numpy as np
from rich.console import Console
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

from ...application.services import (
    DiagnosticRow,
    RecoveryService,
    ReportGeneratorService,
    build_complex,
    count_near_vanishing,
    estimate_kappa,
    estimate_ric_exact,
    estimate_ric_sampled,
    gen_sparse_signal,
    kappa_standard_error,
    l1_concentration,
    measure_phases,
    near_vanishing_probability,
    ric_t_hat_sweep,
    sample_ensemble,
    spe_deviation,
    truth_supports,
)
from ...application.use_cases import ExperimentRunner
from ...domain.exceptions import (
    BaseApplicationException,
    DimensionMismatchError,
    ExceptionHandler,
    ExitCode,
    ParameterError,
)
from ...domain.models import (
    DitheredEnsemble,
    LowRankMap,
    PhaseObservation,
    RecoveryOutcome,
    SensingEnsemble,
    SignalField,
    SolverStatus,
)
from ...domain.utilities import make_rng, read_complex_csv, write_complex_csv
from ...infrastructure.config import Settings, load_experiment_config, reload_settings
from ...infrastructure.logging import RunContext, setup_logging

logger = logging.getLogger(__name__)

console = Console()

RECOVERY_MODES = ["real", "complex", "dithered", "noisy", "lowrank"]
PROBES = ["ric", "l1", "spe", "nearvanish", "kappa"]


class PocsGroup(click.Group):
    """Click group whose usage errors exit with code 1 instead of click's 2."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.UsageError as exc:
            exc.show()
            code = ExitCode.USAGE_ERROR.value
        except click.ClickException as exc:
            exc.show()
            code = exc.exit_code
        except click.Abort:
            console.print("Aborted.", style="yellow")
            code = ExitCode.USAGE_ERROR.value
        else:
            code = rv if isinstance(rv, int) else ExitCode.SUCCESS.value
        if standalone_mode:
            sys.exit(code)
        return code


def _fail(ctx: click.Context, error: BaseException) -> None:
    """Print an error and leave with its mapped exit code."""
    code = ExceptionHandler.exit_code_for(error)
    console.print(f"[bold red]Error:[/bold red] {error}")
    if isinstance(error, BaseApplicationException):
        console.print(error.user_message, style="dim")
    if isinstance(error, BaseApplicationException) and ctx.obj.get("debug"):
        console.print(error.to_dict())
    ctx.exit(code)


def _guarded(ctx: click.Context, action: Callable[[], None]) -> None:
    try:
        with RunContext() as run:
            logger.debug(f"run {run.run_id}: {ctx.info_name}")
            action()
    except (BaseApplicationException, OSError) as exc:
        _fail(ctx, exc)


def _fmt(value: Optional[float]) -> str:
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    return f"{value:.4g}"


@click.group(cls=PocsGroup)
@click.option("-v", "--verbose", is_flag=True, help="Enable verbose logging")
@click.option("--debug", is_flag=True, help="Enable debug logging")
@click.option("--env-file", type=click.Path(dir_okay=False), default=None, help="Path to .env configuration file")
@click.pass_context
def cli(ctx: click.Context, verbose: bool, debug: bool, env_file: Optional[str]) -> None:
    """Phase-only compressive sensing: experiments, recovery and diagnostics."""
    settings = reload_settings(env_file)
    if debug:
        settings = settings.model_copy(update={"debug": True, "log_level": "DEBUG"})
    elif verbose:
        settings = settings.model_copy(update={"log_level": "INFO"})
    setup_logging(settings, force=True)
    ctx.obj = {"settings": settings, "debug": debug}


@cli.command()
@click.option("--config", "config_path", required=True, help="Experiment config file (key = value lines)")
@click.option("--out", required=True, help="Results CSV path (relative paths resolve under the results dir)")
@click.option("--plot", default=None, help="Optional SVG plot path")
@click.option("--seed", type=int, default=None, help="Override master_seed")
@click.option("--threads", type=click.IntRange(min=1), default=None, help="Worker threads (default: settings)")
@click.option("--trials-out", default=None, help="Optional per-trial CSV path")
@click.pass_context
def experiment(
    ctx: click.Context,
    config_path: str,
    out: str,
    plot: Optional[str],
    seed: Optional[int],
    threads: Optional[int],
    trials_out: Optional[str],
) -> None:
    """Run a success-rate sweep and write one row per m."""
    settings: Settings = ctx.obj["settings"]

    def action() -> None:
        overrides: Dict[str, Any] = {} if seed is None else {"master_seed": seed}
        config = load_experiment_config(config_path, settings=settings, overrides=overrides)
        workers = threads or settings.workers
        reports = ReportGeneratorService(settings.results_dir)

        with Progress(
            TextColumn("[bold blue]{task.description}"),
            BarColumn(),
            MofNCompleteColumn(),
            TimeElapsedColumn(),
            console=console,
            transient=True,
        ) as progress:
            task = progress.add_task(config.mode.value, total=len(config.m_list) * config.trials)
            runner = ExperimentRunner(
                config,
                workers=workers,
                progress=lambda done, total: progress.update(task, completed=done),
            )
            curve = runner.run_curve()

        written = reports.write_results_csv(curve, out)
        if trials_out:
            reports.write_trials_csv(runner.records, trials_out, comments=config.header_lines())
        if plot:
            reports.emit_plot([curve], plot, title=config.mode.value)

        table = Table(title=f"{config.mode.value} (s={config.sparsity}, trials={config.trials})")
        for column in ["m", "m/s", "successes", "rate", "mean error", "median iters"]:
            table.add_column(column, justify="right")
        for row in curve.rows:
            table.add_row(
                str(row.m),
                f"{row.m / config.sparsity:.1f}",
                f"{row.successes}/{row.trials}",
                f"{row.rate:.2f}",
                _fmt(row.mean_error),
                f"{row.median_iterations:.0f}",
            )
        console.print(table)
        console.print(f"Results written to [green]{written['output_file']}[/green]")

    _guarded(ctx, action)


def _read_observation(path: str, tau0: Optional[float]) -> PhaseObservation:
    z, meta = read_complex_csv(path)
    if z.shape[1] != 1:
        raise DimensionMismatchError("phases file must hold a single column", expected=1, actual=z.shape[1])
    corrupted = meta.get("corrupted", "0") not in ("0", "false", "False")
    bound = tau0 if tau0 is not None else float(meta.get("tau0", 0.0))
    return PhaseObservation(z[:, 0], corrupted=corrupted or bound > 0, noise_bound=bound)


def _lowrank_map(matrix: np.ndarray, meta: Dict[str, str]) -> LowRankMap:
    try:
        n1, n2 = int(meta["n1"]), int(meta["n2"])
    except (KeyError, ValueError) as exc:
        raise ParameterError(
            "low-rank atom files need '# n1 <int> n2 <int>' metadata", parameter="matrix"
        ) from exc
    if n1 * n2 != matrix.shape[1]:
        raise DimensionMismatchError("atom width must equal n1*n2", expected=n1 * n2, actual=matrix.shape[1])
    return LowRankMap(matrix.reshape(matrix.shape[0], n1, n2))


def _print_outcome(outcome: RecoveryOutcome) -> None:
    report = outcome.report
    table = Table(title="Recovery")
    table.add_column("field")
    table.add_column("value", justify="right")
    table.add_row("status", report.status.value)
    table.add_row("iterations", str(report.iterations))
    table.add_row("primal residual", _fmt(report.primal_residual))
    table.add_row("dual residual", _fmt(report.dual_residual))
    table.add_row("objective", _fmt(report.objective))
    table.add_row("wall time [s]", f"{report.wall_time:.3f}")
    if outcome.phase_consistency is not None:
        table.add_row("phase consistency", _fmt(outcome.phase_consistency))
    if outcome.scale_residue is not None:
        table.add_row("scale residue", _fmt(outcome.scale_residue))
    if outcome.failure:
        table.add_row("failure", outcome.failure)
    console.print(table)


@cli.command()
@click.option("--matrix", required=True, help="Sensing matrix (complex CSV); low-rank atoms as rows of n1*n2")
@click.option("--phases", required=True, help="Observed phases (complex CSV, one column)")
@click.option("--mode", type=click.Choice(RECOVERY_MODES), required=True, help="Recovery pipeline")
@click.option("--rho", type=float, default=None, help="Dither scale for the dithered mode (default: settings)")
@click.option("--dither", default=None, help="Dither vector (complex CSV) for the dithered mode")
@click.option("--tau0", type=float, default=None, help="Noise bound for the noisy mode (default: phases metadata)")
@click.option("--out", required=True, help="Estimate output (complex CSV)")
@click.pass_context
def recover(
    ctx: click.Context,
    matrix: str,
    phases: str,
    mode: str,
    rho: Optional[float],
    dither: Optional[str],
    tau0: Optional[float],
    out: str,
) -> None:
    """Recover a signal from phase-only measurements."""
    settings: Settings = ctx.obj["settings"]

    def action() -> None:
        phi, meta = read_complex_csv(matrix)
        service = RecoveryService(options=settings.solver_options(), threshold=settings.success_threshold)

        if mode == "lowrank":
            lowrank_map = _lowrank_map(phi, meta)
            outcome = service.recover_lowrank(lowrank_map, _read_observation(phases, tau0))
            write_complex_csv(outcome.xhat, out, metadata=[f"status {outcome.report.status.value}"])
        else:
            ens = SensingEnsemble(phi)
            obs = _read_observation(phases, tau0)
            if mode == "dithered":
                if dither is None:
                    raise ParameterError("--dither is required for the dithered mode", parameter="dither")
                tau, _ = read_complex_csv(dither)
                dens = DitheredEnsemble(ens, tau[:, 0], rho if rho is not None else settings.dither_scale)
                outcome = service.recover_full_dithered(dens, obs)
            elif mode == "noisy":
                outcome = service.recover_noisy(ens, obs, obs.noise_bound)
            else:
                outcome = service.recover_sparse(ens, obs, SignalField(mode))
            write_complex_csv(outcome.xhat, out, metadata=[f"status {outcome.report.status.value}"])

        _print_outcome(outcome)
        console.print(f"Estimate written to [green]{out}[/green]")
        if outcome.report.status in (SolverStatus.INFEASIBLE, SolverStatus.NUMERICAL_ERROR):
            ctx.exit(ExitCode.NUMERICAL_FAILURE.value)

    _guarded(ctx, action)


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def _probe_rows(
    probe: str,
    settings: Settings,
    m: int,
    n: int,
    s: int,
    order: int,
    samples: int,
    eta: float,
    seed: int,
    exact: bool,
    t_hats: Sequence[float],
) -> List[DiagnosticRow]:
    rng = make_rng(seed)

    if probe == "kappa":
        value = estimate_kappa(samples, rng)
        return [
            DiagnosticRow("kappa", "", value, samples, seed),
            DiagnosticRow("kappa-stderr", "", kappa_standard_error(samples), samples, seed),
        ]

    ens = sample_ensemble(m, n, rng)
    x = gen_sparse_signal(n, s, SignalField.COMPLEX, rng)
    base = f"m={m} n={n} s={s}"

    if probe == "ric":
        obs = measure_phases(ens, x)
        if t_hats:
            seeds = truth_supports(x, order, rng)
            estimates = ric_t_hat_sweep(obs, ens, order, t_hats, samples, rng, seed_supports=seeds)
            return [
                DiagnosticRow("ric", f"{base} order={order} t_hat={est.t_hat!r}", est.delta, est.samples, seed)
                for est in estimates
            ]
        a = build_complex(obs, ens).a
        if exact:
            estimate = estimate_ric_exact(a, order, cap=settings.ric_enumeration_cap)
        else:
            estimate = estimate_ric_sampled(a, order, samples, rng, seed_supports=truth_supports(x, order, rng))
        params = f"{base} order={order} mode={estimate.mode.value}"
        return [DiagnosticRow("ric", params, estimate.delta, estimate.samples, seed)]

    if probe == "l1":
        worst = max(
            l1_concentration(ens, _unit(gen_sparse_signal(n, s, SignalField.COMPLEX, rng))) for _ in range(samples)
        )
        return [DiagnosticRow("l1", base, worst, samples, seed)]

    if probe == "spe":
        pairs = [
            (
                _unit(gen_sparse_signal(n, s, SignalField.COMPLEX, rng)),
                gen_sparse_signal(n, s, SignalField.COMPLEX, rng),
            )
            for _ in range(samples)
        ]
        return [DiagnosticRow("spe", base, spe_deviation(ens, pairs).deviation, samples, seed)]

    # nearvanish
    fraction = count_near_vanishing(ens, x, eta) / m
    params = f"{base} eta={eta!r}"
    return [
        DiagnosticRow("nearvanish", params, fraction, m, seed),
        DiagnosticRow("nearvanish-reference", params, near_vanishing_probability(eta), 0, seed),
    ]


@cli.command()
@click.option("--probe", type=click.Choice(PROBES), required=True, help="Which probe to run")
@click.option("--m", "m", type=click.IntRange(min=1), default=100, show_default=True, help="Measurements")
@click.option("--n", "n", type=click.IntRange(min=1), default=20, show_default=True, help="Signal dimension")
@click.option("--s", "s", type=click.IntRange(min=1), default=2, show_default=True, help="Sparsity")
@click.option("--order", type=click.IntRange(min=1), default=4, show_default=True, help="RIC order")
@click.option("--samples", type=click.IntRange(min=1), default=1000, show_default=True, help="Sample budget")
@click.option("--eta", type=float, default=0.1, show_default=True, help="Near-vanishing level")
@click.option("--t-hat", "t_hats", type=float, multiple=True, help="Sweep phase-row scaling (repeatable)")
@click.option("--exact", is_flag=True, help="Enumerate every support for the RIC probe")
@click.option("--seed", type=int, default=0, show_default=True, help="Random seed")
@click.option("--out", required=True, help="Diagnostics CSV path")
@click.pass_context
def diagnose(
    ctx: click.Context,
    probe: str,
    m: int,
    n: int,
    s: int,
    order: int,
    samples: int,
    eta: float,
    t_hats: Sequence[float],
    exact: bool,
    seed: int,
    out: str,
) -> None:
    """Run an empirical probe and write probe,parameters,value,samples,seed rows."""
    settings: Settings = ctx.obj["settings"]

    def action() -> None:
        if s > n:
            raise ParameterError(f"s ({s}) cannot exceed n ({n})", parameter="s", value=s)
        rows = _probe_rows(probe, settings, m, n, s, order, samples, eta, seed, exact, list(t_hats))
        written = ReportGeneratorService(settings.results_dir).write_diagnostics_csv(
            rows, out, comments=[f"probe {probe} seed {seed}"]
        )

        table = Table(title=f"diagnose {probe}")
        for column in ["probe", "parameters", "value", "samples"]:
            table.add_column(column)
        for row in rows:
            table.add_row(row.probe, row.parameters, f"{row.value:.6g}", str(row.samples))
        console.print(table)
        console.print(f"Diagnostics written to [green]{written['output_file']}[/green]")

    _guarded(ctx, action)


def main() -> None:
    """Main CLI entry point."""
    cli(prog_name="pocs")


if __name__ == "__main__":
    main()
