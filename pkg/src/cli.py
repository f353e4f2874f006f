"""
RecTune command line.

Commands: auto, evaluate, grid, sample, benchmark, replay.
Exit codes: 0 success, 1 replay mismatch, 2 bad arguments, 3 dataset error,
4 the run failed entirely.
"""

import codecs
import sys
import time
from enum import Enum
from pathlib import Path
from typing import Any, Optional

import click
import typer
import yaml
from loguru import logger
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from . import __version__
from .algorithms.registry import ALGORITHMS, get_algorithm
from .config import config
from .data.folds import kfold_split
from .data.ratings import PRESETS, RatingsTable, load_ratings
from .errors import (
    ConfigurationError,
    DatasetError,
    FoldEvaluationError,
    GridError,
    InvalidAssignmentError,
    InvalidSpaceError,
    SelectionFailedError,
)
from .evaluation.cross_validation import cross_validate
from .models.enums import AlgorithmName, Metric, Strategy
from .models.schemas import (
    AutoManifest,
    BenchmarkManifest,
    DatasetDigest,
    EvaluateManifest,
    FormatSpec,
    GridManifest,
    RatingScale,
    TpeConfig,
)
from .search.grid import DEFAULT_GRIDS, grid_search
from .search.space import load_space
from .selection.engine import selection_config_from_env
from .selection.orchestrator import all_failed, resolve_algorithms, run_selection
from .utils.config_files import load_grid, load_space_overrides
from .utils.sampling import RatingSampler

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_BAD_ARGS = 2
EXIT_DATASET = 3
EXIT_FAILED = 4

app = typer.Typer(
    name="rectune",
    help="Automated recommender selection and hyperparameter tuning.",
    add_completion=False,
    no_args_is_help=True,
)

out = Console()
err = Console(stderr=True)


def setup_logging(level: str) -> None:
    """One stderr sink; stdout stays reserved for the summary."""
    logger.remove()
    logger.add(
        sys.stderr,
        level=level.upper(),
        format="<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | {message}",
    )


def fail(message: str, code: int) -> typer.Exit:
    err.print(f"[red]error:[/red] {message}", highlight=False)
    return typer.Exit(code=code)


def _command_echo() -> list[str]:
    """Parameters that shape the result; output location and verbosity left out."""
    ctx = click.get_current_context()
    echo = [ctx.command_path]
    flags = {p.name: p.opts[0] for p in ctx.command.params}
    for name, value in sorted(ctx.params.items()):
        if value is None or name in ("out_path", "log_level"):
            continue
        if isinstance(value, Enum):
            value = value.value
        flag = flags.get(name, name)
        echo.append(f"{flag}={value}" if flag.startswith("-") else str(value))
    return echo


def resolve_format(
    preset: Optional[str],
    sep: Optional[str],
    cols: Optional[str],
    scale: Optional[str],
    header: Optional[bool],
    encoding: Optional[str] = None,
) -> FormatSpec:
    """Preset (or the default layout) with explicit flags layered on top."""
    if preset is not None:
        if preset not in PRESETS:
            raise fail(f"unknown preset '{preset}'; valid: {', '.join(PRESETS)}", EXIT_BAD_ARGS)
        base = PRESETS[preset]
    else:
        base = FormatSpec()

    updates: dict[str, Any] = {}
    if sep is not None:
        updates["delimiter"] = sep.encode().decode("unicode_escape")
    if cols is not None:
        updates["columns"] = tuple(c.strip() for c in cols.split(",") if c.strip())
    if scale is not None:
        try:
            low, high = (float(part) for part in scale.split(","))
            updates["scale"] = RatingScale(min=low, max=high)
        except (ValueError, ValidationError):
            raise fail(f"--scale must be 'min,max' with min < max, got '{scale}'", EXIT_BAD_ARGS)
    if header is not None:
        updates["header"] = header
    if encoding is not None:
        updates["encoding"] = encoding
    try:
        return FormatSpec(**{**base.model_dump(), **updates})
    except ValidationError as e:
        raise fail(f"invalid format: {e.errors()[0]['msg']}", EXIT_BAD_ARGS)


def load_table(path: Path, fmt: FormatSpec) -> RatingsTable:
    try:
        return load_ratings(path, fmt)
    except DatasetError as e:
        raise fail(str(e), EXIT_DATASET)


def digest(path: Path, table: RatingsTable, fmt: FormatSpec) -> DatasetDigest:
    return DatasetDigest(
        path=str(path),
        n_users=table.n_users,
        n_items=table.n_items,
        n_ratings=table.n_ratings,
        scale=fmt.scale,
        format=fmt,
    )


def parse_algorithm(name: str) -> AlgorithmName:
    try:
        return AlgorithmName.parse(name)
    except ValueError as e:
        raise fail(str(e), EXIT_BAD_ARGS)


def write_report(manifest, path: Optional[Path], default_name: str) -> Path:
    target = path if path is not None else config.REPORT_DIR / default_name
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return target


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.4f}"


# Shared option declarations
DATA = typer.Option(..., "--data", "-d", help="Ratings file")
PRESET = typer.Option(None, "--preset", help=f"Dataset layout: {', '.join(PRESETS)}")
SEP = typer.Option(None, "--sep", help="Field delimiter (escapes like \\t allowed)")
COLS = typer.Option(None, "--cols", help="Comma-separated columns, e.g. user,item,rating")
SCALE = typer.Option(None, "--scale", help="Rating scale as 'min,max'")
HEADER = typer.Option(None, "--header/--no-header", help="First line is a header")
ENCODING = typer.Option(None, "--encoding", help="File encoding (default utf-8)")
SEED = typer.Option(None, "--seed", help="Base seed (default RECTUNE_SEED)")
OUT = typer.Option(None, "--out", "-o", help="Report path")
LOG_LEVEL = typer.Option(None, "--log-level", help="Log level (default RECTUNE_LOG_LEVEL)")


@app.command()
def auto(
    data: Path = DATA,
    preset: Optional[str] = PRESET,
    sep: Optional[str] = SEP,
    cols: Optional[str] = COLS,
    scale: Optional[str] = SCALE,
    header: Optional[bool] = HEADER,
    encoding: Optional[str] = ENCODING,
    metric: Optional[Metric] = typer.Option(None, "--metric", help="Target metric"),
    strategy: Optional[Strategy] = typer.Option(None, "--strategy", help="Search strategy"),
    time_budget: Optional[float] = typer.Option(
        None, "--time-budget", help="Global wall-clock seconds (0 disables)"
    ),
    max_evals: Optional[int] = typer.Option(None, "--max-evals", help="Trials per algorithm"),
    gate_evals: Optional[int] = typer.Option(None, "--gate-evals", help="Trials before the baseline gate"),
    cv_folds: Optional[int] = typer.Option(None, "--cv-folds", help="Folds per trial"),
    final_cv_folds: Optional[int] = typer.Option(
        None, "--final-cv-folds", help="Folds for the winner's final evaluation (0 skips it)"
    ),
    jobs: Optional[int] = typer.Option(None, "--jobs", "-j", help="Parallel workers"),
    seed: Optional[int] = SEED,
    algos: Optional[str] = typer.Option(None, "--algos", help="Comma-separated algorithms"),
    space: Optional[Path] = typer.Option(None, "--space", help="YAML/JSON space overrides"),
    tpe_startup: Optional[int] = typer.Option(None, "--tpe-startup", help="Random trials before TPE"),
    tpe_gamma: Optional[float] = typer.Option(None, "--tpe-gamma", help="TPE good-trial quantile"),
    tpe_candidates: Optional[int] = typer.Option(None, "--tpe-candidates", help="TPE draws per parameter"),
    timings: Optional[bool] = typer.Option(
        None, "--timings/--no-timings", help="Record wall-clock fields (default: with a time budget)"
    ),
    out_path: Optional[Path] = OUT,
    log_level: Optional[str] = LOG_LEVEL,
):
    """Search all algorithms and their hyperparameters; report the winner."""
    setup_logging(log_level or config.LOG_LEVEL)
    fmt = resolve_format(preset, sep, cols, scale, header, encoding)

    # Limits given on the command line replace the environment defaults together.
    if time_budget is None and max_evals is None:
        time_budget = config.time_budget_or_none()
        max_evals = config.MAX_EVALS if config.MAX_EVALS > 0 else None
    if time_budget is not None and time_budget <= 0:
        time_budget = None

    names = [a.strip() for a in algos.split(",") if a.strip()] if algos else []
    try:
        resolve_algorithms(names)
    except ValueError as e:
        raise fail(str(e), EXIT_BAD_ARGS)

    overrides = None
    if space is not None:
        try:
            overrides = load_space_overrides(space)
        except InvalidSpaceError as e:
            raise fail(str(e), EXIT_BAD_ARGS)

    given: dict[str, Any] = {
        "metric": metric,
        "strategy": strategy,
        "gate_evals": gate_evals,
        "parallelism": jobs,
        "seed": seed,
        "cv_folds": cv_folds,
    }
    overrides_cfg = {k: v for k, v in given.items() if v is not None}
    overrides_cfg["algorithms"] = [AlgorithmName.parse(n).value for n in names]
    if final_cv_folds is not None:
        overrides_cfg["final_cv_folds"] = final_cv_folds or None
    tpe_given = {"n_startup": tpe_startup, "gamma": tpe_gamma, "n_candidates": tpe_candidates}
    tpe_fields = {
        "n_startup": config.TPE_STARTUP,
        "gamma": config.TPE_GAMMA,
        "n_candidates": config.TPE_CANDIDATES,
        **{k: v for k, v in tpe_given.items() if v is not None},
    }
    try:
        selection = selection_config_from_env(
            time_budget=time_budget,
            max_evals_per_algorithm=max_evals,
            tpe=TpeConfig(**tpe_fields),
            **overrides_cfg,
        )
    except (ValidationError, ValueError) as e:
        raise fail(f"invalid configuration: {e}", EXIT_BAD_ARGS)

    table = load_table(data, fmt)
    if selection.cv_folds > table.n_ratings:
        raise fail(f"--cv-folds {selection.cv_folds} exceeds {table.n_ratings} ratings", EXIT_BAD_ARGS)

    report = run_selection(selection, table, space_overrides=overrides)
    keep_timings = timings if timings is not None else selection.time_budget is not None
    if not keep_timings:
        report = report.without_timings()

    manifest = AutoManifest.from_report(
        report,
        command=_command_echo(),
        version=__version__,
        dataset=digest(data, table, fmt),
        config=selection,
        space_overrides=(
            {name: s.model_dump(mode="json") for name, s in overrides.items()} if overrides else None
        ),
    )
    target = write_report(manifest, out_path, f"auto-{data.stem}.json")

    winner = report.winner
    out.print(f"[bold]Winner:[/bold] {winner.algorithm}", highlight=False)
    out.print(f"{selection.metric.value}: {winner.loss:.4f} (baseline {report.baseline_loss:.4f})")
    if winner.final_eval is not None:
        out.print(
            f"final {winner.final_eval.n_folds}-fold {selection.metric.value}: "
            f"{winner.final_eval.mean_loss:.4f}"
        )
    out.print(f"params: {winner.params}", highlight=False)
    if not winner.beat_baseline:
        out.print("no algorithm beat the random baseline")

    summary = Table(title="Algorithms")
    for column in ("algorithm", "status", "trials", "best loss", "best params"):
        summary.add_column(column)
    for row in report.summary_rows():
        summary.add_row(
            row["algorithm"], row["status"], str(row["trials"]), _fmt(row["best_loss"]),
            str(row["best_params"]),
        )
    out.print(summary)
    out.print(f"report: {target}", highlight=False)

    if all_failed(report):
        raise fail("every algorithm failed", EXIT_FAILED)


def _parse_params(params: Optional[str]) -> dict[str, Any]:
    if params is None:
        return {}
    try:
        parsed = yaml.safe_load(params)
    except yaml.YAMLError as e:
        raise fail(f"--params is not valid JSON/YAML: {e}", EXIT_BAD_ARGS)
    if parsed is None:
        return {}
    if not isinstance(parsed, dict):
        raise fail("--params must be a mapping of parameter names to values", EXIT_BAD_ARGS)
    return parsed


@app.command()
def evaluate(
    algo: str = typer.Option(..., "--algo", "-a", help="Algorithm name or slug"),
    data: Path = DATA,
    preset: Optional[str] = PRESET,
    sep: Optional[str] = SEP,
    cols: Optional[str] = COLS,
    scale: Optional[str] = SCALE,
    header: Optional[bool] = HEADER,
    encoding: Optional[str] = ENCODING,
    params: Optional[str] = typer.Option(None, "--params", help="JSON/YAML mapping of parameters"),
    metric: Optional[Metric] = typer.Option(None, "--metric", help="Reported target metric"),
    cv_folds: Optional[int] = typer.Option(None, "--cv-folds", help="Folds (default RECTUNE_FINAL_CV_FOLDS)"),
    seed: Optional[int] = SEED,
    out_path: Optional[Path] = OUT,
    log_level: Optional[str] = LOG_LEVEL,
):
    """Cross-validate one algorithm with its defaults or given parameters."""
    setup_logging(log_level or config.LOG_LEVEL)
    name = parse_algorithm(algo)
    spec = get_algorithm(name)
    assignment = _parse_params(params)
    try:
        spec.resolve(assignment)
    except InvalidAssignmentError as e:
        raise fail(str(e), EXIT_BAD_ARGS)

    fmt = resolve_format(preset, sep, cols, scale, header, encoding)
    table = load_table(data, fmt)
    metric = metric or Metric(config.METRIC)
    k = cv_folds if cv_folds is not None else config.FINAL_CV_FOLDS
    seed = seed if seed is not None else config.SEED
    try:
        folds = kfold_split(table, k, seed)
    except ValueError as e:
        raise fail(str(e), EXIT_BAD_ARGS)

    try:
        result = cross_validate(spec, assignment, table, folds, metric, seed)
    except FoldEvaluationError as e:
        raise fail(f"{name.value} failed: {e}", EXIT_FAILED)

    manifest = EvaluateManifest(
        command=_command_echo(),
        version=__version__,
        dataset=digest(data, table, fmt),
        config={"cv_folds": k, "seed": seed, "metric": metric.value},
        algorithm=name.value,
        params=assignment,
        result=result,
    )
    target = write_report(manifest, out_path, f"evaluate-{name.slug}-{data.stem}.json")

    out.print(f"[bold]{name.value}[/bold] ({k}-fold)", highlight=False)
    out.print(f"RMSE: {result.measures['rmse']:.4f}")
    out.print(f"MAE:  {result.measures['mae']:.4f}")
    out.print(f"fit time: {result.fit_time:.2f}s  test time: {result.test_time:.2f}s")
    out.print(f"report: {target}", highlight=False)


@app.command()
def grid(
    algo: str = typer.Option(..., "--algo", "-a", help="Algorithm name or slug"),
    data: Path = DATA,
    grid_file: Optional[Path] = typer.Option(None, "--grid", help="YAML/JSON grid (default grid if omitted)"),
    preset: Optional[str] = PRESET,
    sep: Optional[str] = SEP,
    cols: Optional[str] = COLS,
    scale: Optional[str] = SCALE,
    header: Optional[bool] = HEADER,
    encoding: Optional[str] = ENCODING,
    metric: Optional[Metric] = typer.Option(None, "--metric", help="Target metric"),
    cv_folds: Optional[int] = typer.Option(None, "--cv-folds", help="Folds (default RECTUNE_CV_FOLDS)"),
    seed: Optional[int] = SEED,
    timings: bool = typer.Option(True, "--timings/--no-timings", help="Record wall-clock fields"),
    out_path: Optional[Path] = OUT,
    log_level: Optional[str] = LOG_LEVEL,
):
    """Exhaustive grid search for one algorithm."""
    setup_logging(log_level or config.LOG_LEVEL)
    name = parse_algorithm(algo)
    spec = get_algorithm(name)

    if grid_file is not None:
        try:
            values = load_grid(grid_file)
        except GridError as e:
            raise fail(f"{e}" + (f" (key: {e.key})" if e.key else ""), EXIT_BAD_ARGS)
    elif name in DEFAULT_GRIDS:
        values = DEFAULT_GRIDS[name]
    else:
        raise fail(f"no default grid for {name.value}; pass --grid", EXIT_BAD_ARGS)

    fmt = resolve_format(preset, sep, cols, scale, header, encoding)
    table = load_table(data, fmt)
    metric = metric or Metric(config.METRIC)
    k = cv_folds if cv_folds is not None else config.CV_FOLDS
    seed = seed if seed is not None else config.SEED
    try:
        folds = kfold_split(table, k, seed)
    except ValueError as e:
        raise fail(str(e), EXIT_BAD_ARGS)

    started = time.perf_counter()
    try:
        best, trials = grid_search(spec, values, table, folds, metric, seed)
    except GridError as e:
        raise fail(f"{e}" + (f" (key: {e.key})" if e.key else ""), EXIT_BAD_ARGS)
    except SelectionFailedError as e:
        raise fail(str(e), EXIT_FAILED)
    wall_time = time.perf_counter() - started

    if not timings:
        best, trials, wall_time = best.without_timings(), [t.without_timings() for t in trials], None

    manifest = GridManifest(
        command=_command_echo(),
        version=__version__,
        dataset=digest(data, table, fmt),
        config={"cv_folds": k, "seed": seed, "metric": metric.value},
        algorithm=name.value,
        grid=values,
        best=best,
        trials=trials,
        wall_time_s=wall_time,
    )
    target = write_report(manifest, out_path, f"grid-{name.slug}-{data.stem}.json")

    out.print(f"[bold]{name.value}[/bold] grid: {len(trials)} points", highlight=False)
    out.print(f"best {metric.value}: {best.loss:.4f} with {best.assignment}", highlight=False)
    if wall_time is not None:
        out.print(f"wall time: {wall_time:.1f}s")
    out.print(f"report: {target}", highlight=False)


@app.command()
def sample(
    source: Path = typer.Option(..., "--data", "-d", help="Source ratings file"),
    n: int = typer.Option(..., "--n", "-n", help="Rows to draw"),
    output: Path = typer.Option(..., "--out", "-o", help="Output file"),
    seed: Optional[int] = SEED,
    header: bool = typer.Option(False, "--header/--no-header", help="Carry the header line over"),
    encoding: str = typer.Option("utf-8", "--encoding", help="File encoding, kept for the output"),
    log_level: Optional[str] = LOG_LEVEL,
):
    """Write a seeded uniform sample of rating rows in the source format."""
    setup_logging(log_level or config.LOG_LEVEL)
    if not source.is_file():
        raise fail(f"ratings file not found: {source}", EXIT_DATASET)
    try:
        codecs.lookup(encoding)
    except LookupError:
        raise fail(f"unknown encoding '{encoding}'", EXIT_BAD_ARGS)
    sampler = RatingSampler(
        seed=seed if seed is not None else config.SEED, header=header, encoding=encoding
    )
    try:
        written = sampler.sample_file(source, n, output)
    except DatasetError as e:
        raise fail(str(e), EXIT_DATASET)
    except ValueError as e:
        raise fail(str(e), EXIT_BAD_ARGS)
    out.print(f"wrote {written} rows to {output}", highlight=False)


@app.command()
def benchmark(
    data: Path = DATA,
    preset: Optional[str] = PRESET,
    sep: Optional[str] = SEP,
    cols: Optional[str] = COLS,
    scale: Optional[str] = SCALE,
    header: Optional[bool] = HEADER,
    encoding: Optional[str] = ENCODING,
    algos: Optional[str] = typer.Option(None, "--algos", help="Comma-separated algorithms"),
    cv_folds: Optional[int] = typer.Option(None, "--cv-folds", help="Folds (default RECTUNE_FINAL_CV_FOLDS)"),
    seed: Optional[int] = SEED,
    out_path: Optional[Path] = OUT,
    log_level: Optional[str] = LOG_LEVEL,
):
    """Evaluate every algorithm at its default parameters."""
    setup_logging(log_level or config.LOG_LEVEL)
    names = [a.strip() for a in algos.split(",") if a.strip()] if algos else []
    try:
        selected = resolve_algorithms(names)
    except ValueError as e:
        raise fail(str(e), EXIT_BAD_ARGS)

    fmt = resolve_format(preset, sep, cols, scale, header, encoding)
    table = load_table(data, fmt)
    k = cv_folds if cv_folds is not None else config.FINAL_CV_FOLDS
    seed = seed if seed is not None else config.SEED
    try:
        folds = kfold_split(table, k, seed)
    except ValueError as e:
        raise fail(str(e), EXIT_BAD_ARGS)

    results, errors = {}, {}
    for name in selected:
        try:
            results[name.value] = cross_validate(ALGORITHMS[name], {}, table, folds, Metric.RMSE, seed)
        except FoldEvaluationError as e:
            logger.error(f"{name.value}: {e}")
            errors[name.value] = str(e)

    manifest = BenchmarkManifest(
        command=_command_echo(),
        version=__version__,
        dataset=digest(data, table, fmt),
        config={"cv_folds": k, "seed": seed},
        results=results,
        errors=errors,
    )
    target = write_report(manifest, out_path, f"benchmark-{data.stem}.json")

    summary = Table(title=f"Default parameters, {k}-fold")
    for column in ("algorithm", "RMSE", "MAE", "fit s", "test s"):
        summary.add_column(column)
    for name, result in results.items():
        summary.add_row(
            name, _fmt(result.measures["rmse"]), _fmt(result.measures["mae"]),
            f"{result.fit_time:.2f}", f"{result.test_time:.2f}",
        )
    for name in errors:
        summary.add_row(name, "failed", "-", "-", "-")
    out.print(summary)
    out.print(f"report: {target}", highlight=False)

    if not results:
        raise fail("every algorithm failed", EXIT_FAILED)


@app.command()
def replay(
    manifest_path: Path = typer.Argument(..., help="Report written by 'auto'"),
    log_level: Optional[str] = LOG_LEVEL,
):
    """Re-run an 'auto' report with one worker and check every trial loss."""
    setup_logging(log_level or config.LOG_LEVEL)
    try:
        manifest = AutoManifest.model_validate_json(manifest_path.read_text(encoding="utf-8"))
    except (OSError, ValidationError) as e:
        raise fail(f"cannot read auto report {manifest_path}: {e}", EXIT_BAD_ARGS)

    overrides = None
    if manifest.space_overrides:
        try:
            overrides = {name: load_space(s) for name, s in manifest.space_overrides.items()}
        except InvalidSpaceError as e:
            raise fail(str(e), EXIT_BAD_ARGS)

    table = load_table(Path(manifest.dataset.path), manifest.dataset.format)
    selection = manifest.config.model_copy(update={"parallelism": 1})
    report = run_selection(selection, table, space_overrides=overrides)

    mismatches = []
    compared = 0
    for name, original in manifest.outcomes.items():
        rerun = report.outcomes.get(name)
        rerun_trials = {t.index: t for t in rerun.trial_history} if rerun else {}
        for trial in original.trial_history:
            again = rerun_trials.get(trial.index)
            if again is None:
                continue
            compared += 1
            if again.loss != trial.loss or again.assignment != trial.assignment:
                mismatches.append((name, trial.index, trial.loss, again.loss))

    out.print(f"compared {compared} trials", highlight=False)
    if mismatches:
        table_out = Table(title="Mismatched trials")
        for column in ("algorithm", "trial", "reported", "replayed"):
            table_out.add_column(column)
        for name, index, before, after in mismatches:
            table_out.add_row(name, str(index), _fmt(before), _fmt(after))
        out.print(table_out)
        raise typer.Exit(code=EXIT_MISMATCH)
    out.print("all trial losses reproduced")


def main() -> None:
    try:
        config.validate()
    except ConfigurationError as e:
        err.print(f"[red]configuration error:[/red] {e}")
        sys.exit(EXIT_BAD_ARGS)
    app()
