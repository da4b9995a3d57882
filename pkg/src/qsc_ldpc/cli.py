#!/usr/bin/env python3
"""Command-line interface for qsc_ldpc.

Exit codes: 0 ok, 1 usage error, 2 validation error, 3 numerical failure.
"""
import csv
import io
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, TypeVar

import click
from pydantic import BaseModel, ValidationError
from pydantic_core import to_json

from qsc_ldpc import __version__
from qsc_ldpc.config import settings
from qsc_ldpc.exceptions import InfeasibleDesignError, NumericalError, QscLdpcError
from qsc_ldpc.models.code import ConstructionSpec
from qsc_ldpc.models.config import (
    CapacitySection,
    CodeSource,
    DesignSection,
    ExitSection,
    LayeredSection,
    RunConfig,
    SimConfig,
)
from qsc_ldpc.services.harness import CSV_COLUMNS
from qsc_ldpc.tools import (
    CapacityTool,
    ConstructTool,
    DesignTool,
    ExitTool,
    LayeredTool,
    SimulateTool,
    VerifierTool,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3

F = TypeVar("F", bound=Callable[..., Any])
S = TypeVar("S", bound=BaseModel)


def common_options(fn: F) -> F:
    """Options every subcommand accepts."""
    options = [
        click.option(
            "--config",
            "config_path",
            type=click.Path(exists=True, dir_okay=False, path_type=Path),
            help="JSON run configuration (version 1)",
        ),
        click.option("--seed", type=int, default=None, help="Master random seed"),
        click.option(
            "--out",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="Output file (CSV or JSON); stdout when omitted",
        ),
        click.option("--workers", type=click.IntRange(min=1), default=None),
        click.option(
            "--log-level",
            type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
            default=None,
            help="Logging level",
        ),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _setup_logging(level: str | None) -> None:
    cfg = settings()
    logging.basicConfig(
        level=getattr(logging, (level or cfg.log_level).upper()),
        format=cfg.log_format,
    )


def _load_config(path: Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    logger.info(f"Reading configuration from {path}")
    return RunConfig.model_validate_json(path.read_text())


def _merge(model: type[S], section: BaseModel | None, **overrides: Any) -> S:
    """Section from the config file with non-empty command-line values on top."""
    base = section.model_dump() if section is not None else {}
    flags = {
        k: v
        for k, v in overrides.items()
        if v is not None and not (isinstance(v, (list, tuple)) and not v)
    }
    return model.model_validate({**base, **flags})


def _workers(workers: int | None, run: RunConfig) -> int:
    """--workers, else the config file value, else 1."""
    if workers is not None:
        return workers
    return run.workers or 1


def _serial_only(command: str, workers: int | None) -> None:
    if workers is not None and workers > 1:
        logger.warning(f"--workers has no effect on the {command} command")


def _split(values: Sequence[str]) -> list[str] | None:
    """Accept both repeated options and comma-separated lists."""
    items = [part.strip() for value in values for part in value.split(",") if part.strip()]
    return items or None


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text)
        logger.info(f"Wrote {out}")


def write_csv(rows: Sequence[dict[str, Any]], out: Path | None, columns: Sequence[str] | None = None) -> None:
    """Headered, comma-separated rows with full-precision floats."""
    if not rows and columns is None:
        logger.warning("No rows to write")
        _emit("", out)
        return
    buffer = io.StringIO()
    fieldnames = list(columns) if columns is not None else list(rows[0])
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(buffer.getvalue(), out)


def write_json(payload: BaseModel | dict[str, Any], out: Path | None) -> None:
    """Indented JSON through pydantic."""
    if isinstance(payload, BaseModel):
        text = payload.model_dump_json(indent=2)
    else:
        text = to_json(payload, indent=2).decode()
    _emit(text + "\n", out)


@click.group()
@click.version_option(__version__, prog_name="qsc-ldpc")
def cli() -> None:
    """Binary LDPC coding for the q-ary symmetric channel."""


@cli.command()
@common_options
@click.option("--m", "m_values", type=click.IntRange(1, 62), multiple=True, help="Bits per symbol")
@click.option("--eps", "epsilons", type=click.FloatRange(0.0, 1.0), multiple=True, help="Symbol error rate")
def capacity(
    config_path: Path | None,
    seed: int | None,
    out: Path | None,
    workers: int | None,
    log_level: str | None,
    m_values: tuple[int, ...],
    epsilons: tuple[float, ...],
) -> None:
    """q-SC capacity against m times the marginal BSC capacity."""
    _setup_logging(log_level)
    _serial_only("capacity", workers)
    run = _load_config(config_path)
    section = _merge(CapacitySection, run.capacity, m=list(m_values), epsilon=list(epsilons))
    write_csv(CapacityTool().capacity_table(section.m, section.epsilon), out)


@cli.command()
@common_options
@click.option("--m", "m_values", type=click.IntRange(1, 62), multiple=True)
@click.option("--eps", "epsilons", type=click.FloatRange(0.0, 1.0), multiple=True)
def layered(
    config_path: Path | None,
    seed: int | None,
    out: Path | None,
    workers: int | None,
    log_level: str | None,
    m_values: tuple[int, ...],
    epsilons: tuple[float, ...],
) -> None:
    """Layered-scheme rates, including every thick-layer split."""
    _setup_logging(log_level)
    _serial_only("layered", workers)
    run = _load_config(config_path)
    section = _merge(LayeredSection, run.layered, m=list(m_values), epsilon=list(epsilons))
    write_csv(LayeredTool().rate_table(section.m, section.epsilon), out)


@cli.command(name="exit")
@common_options
@click.option("--m", "m_values", type=click.IntRange(1, 62), multiple=True)
@click.option("--eps", "epsilons", type=click.FloatRange(0.0, 1.0), multiple=True)
@click.option("--model", "models", multiple=True, help="bec, gauss or bec-mc; comma lists allowed")
@click.option("--grid-points", type=click.IntRange(min=2), default=None)
@click.option("--samples", "n_samples", type=click.IntRange(min=100), default=None)
def exit_command(
    config_path: Path | None,
    seed: int | None,
    out: Path | None,
    workers: int | None,
    log_level: str | None,
    m_values: tuple[int, ...],
    epsilons: tuple[float, ...],
    models: tuple[str, ...],
    grid_points: int | None,
    n_samples: int | None,
) -> None:
    """Front-end EXIT curves."""
    _setup_logging(log_level)
    run = _load_config(config_path)
    section = _merge(
        ExitSection,
        run.exit,
        m=list(m_values),
        epsilon=list(epsilons),
        models=_split(models),
        grid_points=grid_points,
        n_samples=n_samples,
    )
    tool = ExitTool()
    curves = tool.curves(
        section.m,
        section.epsilon,
        section.models,
        section.grid_points,
        section.n_samples,
        seed if seed is not None else run.seed,
        workers=_workers(workers, run),
    )
    write_csv(tool.rows(curves), out)


@cli.command()
@common_options
@click.option("--m", "m_values", type=click.IntRange(1, 62), multiple=True)
@click.option("--eps", "epsilons", type=click.FloatRange(0.0, 1.0), multiple=True)
@click.option("--d-v", type=click.IntRange(min=2), default=None)
@click.option("--d-c-max", type=click.IntRange(min=2), default=None)
@click.option("--margin", type=click.FloatRange(min=0.0), default=None)
@click.option("--prior-model", type=click.Choice(["gaussian", "bec"]), default=None)
@click.option("--samples", "n_samples", type=click.IntRange(min=100), default=None)
@click.option("--threshold/--no-threshold", default=None, help="Also predict the threshold")
def design(
    config_path: Path | None,
    seed: int | None,
    out: Path | None,
    workers: int | None,
    log_level: str | None,
    m_values: tuple[int, ...],
    epsilons: tuple[float, ...],
    d_v: int | None,
    d_c_max: int | None,
    margin: float | None,
    prior_model: str | None,
    n_samples: int | None,
    threshold: bool | None,
) -> None:
    """Optimize the check-degree distribution (JSON for one point, CSV for a sweep)."""
    _setup_logging(log_level)
    run = _load_config(config_path)
    section = _merge(
        DesignSection,
        run.design,
        m=list(m_values),
        epsilon=list(epsilons),
        d_v=d_v,
        d_c_max=d_c_max,
        margin=margin,
        prior_model=prior_model,
        n_samples=n_samples,
        threshold=threshold,
    )
    master = seed if seed is not None else (run.seed or 0)
    tool = DesignTool()
    if len(section.m) == 1 and len(section.epsilon) == 1:
        write_json(tool.optimize(section, master).to_json_dict(), out)
    else:
        write_csv(tool.sweep(section, master, workers=_workers(workers, run)), out)


class DesignFile(BaseModel):
    """The part of a design JSON file the construct command reads."""

    rho: dict[int, float]


def _parse_rho(text: str) -> dict[int, float]:
    rho: dict[int, float] = {}
    for part in text.split(","):
        degree, _, fraction = part.partition(":")
        try:
            rho[int(degree)] = float(fraction)
        except ValueError as e:
            raise click.BadParameter(f"expected degree:fraction pairs, got {part!r}") from e
    return rho


@cli.command()
@common_options
@click.option("--n-bits", type=click.IntRange(min=2), default=None)
@click.option("--m", "symbol_width", type=click.IntRange(1, 62), default=None)
@click.option("--d-v", type=click.IntRange(min=1), default=None)
@click.option("--rho", "rho_text", default=None, help="Check distribution as 'd:frac,d:frac'")
@click.option(
    "--from-design",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="JSON output of the design command supplying rho",
)
@click.option("--alist", type=click.Path(dir_okay=False, path_type=Path), default=None)
def construct(
    config_path: Path | None,
    seed: int | None,
    out: Path | None,
    workers: int | None,
    log_level: str | None,
    n_bits: int | None,
    symbol_width: int | None,
    d_v: int | None,
    rho_text: str | None,
    from_design: Path | None,
    alist: Path | None,
) -> None:
    """PEG construction with symbol separation; writes alist and a JSON report."""
    _setup_logging(log_level)
    _serial_only("construct", workers)
    run = _load_config(config_path)
    rho = _parse_rho(rho_text) if rho_text else None
    if rho is None and from_design is not None:
        rho = DesignFile.model_validate_json(from_design.read_text()).rho
    spec = _merge(
        ConstructionSpec,
        run.construction,
        n_bits=n_bits,
        symbol_width=symbol_width,
        d_v=d_v,
        rho=rho,
        seed=seed if seed is not None else run.seed,
    )
    _, report = ConstructTool().construct(spec, alist)
    write_json(report, out)


@cli.command()
@common_options
@click.option("--alist", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--m", type=click.IntRange(1, 62), default=None)
@click.option("--eps", "epsilons", type=click.FloatRange(0.0, 1.0), multiple=True)
@click.option("--channel", type=click.Choice(["qsc", "qsc-star"]), default=None)
@click.option("--eps-cond", default=None, help="Comma list of m conditional bit error rates")
@click.option("--max-iter", type=click.IntRange(min=1), default=None)
@click.option("--refresh-period", type=click.IntRange(min=0), default=None)
@click.option("--min-bit-errors", type=click.IntRange(min=1), default=None)
@click.option("--max-codewords", type=click.IntRange(min=1), default=None)
@click.option("--all-zero/--random-codewords", default=None)
@click.option("--baseline/--front-end", default=None, help="Freeze the front-end")
@click.option("--compare", is_flag=True, help="Run front-end and baseline side by side")
def simulate(
    config_path: Path | None,
    seed: int | None,
    out: Path | None,
    workers: int | None,
    log_level: str | None,
    alist: str | None,
    m: int | None,
    epsilons: tuple[float, ...],
    channel: str | None,
    eps_cond: str | None,
    max_iter: int | None,
    refresh_period: int | None,
    min_bit_errors: int | None,
    max_codewords: int | None,
    all_zero: bool | None,
    baseline: bool | None,
    compare: bool,
) -> None:
    """Monte-Carlo BER sweep."""
    _setup_logging(log_level)
    run = _load_config(config_path)
    config = _merge(
        SimConfig,
        run.simulate,
        code=CodeSource(alist=alist).model_dump() if alist is not None else None,
        m=m,
        epsilon=list(epsilons),
        channel=channel,
        eps_cond=[float(v) for v in eps_cond.split(",")] if eps_cond else None,
        max_iter=max_iter,
        frontend_refresh_period=refresh_period,
        min_bit_errors=min_bit_errors,
        max_codewords=max_codewords,
        all_zero=all_zero,
        baseline=baseline,
        seed=seed if seed is not None else run.seed,
        workers=workers if workers is not None else run.workers,
    )
    tool = SimulateTool()
    if compare:
        write_csv(tool.compare(config), out, columns=["decoder", *CSV_COLUMNS])
    else:
        records = tool.simulate(config)
        write_csv([r.model_dump() for r in records], out, columns=CSV_COLUMNS)


@cli.command()
@common_options
@click.pass_context
def verify(
    ctx: click.Context,
    config_path: Path | None,
    seed: int | None,
    out: Path | None,
    workers: int | None,
    log_level: str | None,
) -> None:
    """Run every invariant and oracle suite; exit status 0 iff all pass."""
    _setup_logging(log_level)
    _serial_only("verify", workers)
    run = _load_config(config_path)
    master = seed if seed is not None else (run.seed or 0)
    report = VerifierTool(master).verify()
    write_json(report, out)
    if not report["overall_valid"]:
        ctx.exit(EXIT_NUMERICAL)


def run(argv: Sequence[str] | None = None) -> int:
    """Invoke the CLI and translate failures into exit codes."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_VALIDATION
    except click.Abort:
        return EXIT_USAGE
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_VALIDATION
    except (NumericalError, InfeasibleDesignError) as e:
        logger.error(f"Numerical failure: {e}")
        return EXIT_NUMERICAL
    except QscLdpcError as e:
        logger.error(f"Validation failed: {e}")
        return EXIT_VALIDATION
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return EXIT_VALIDATION
    return rv if isinstance(rv, int) else EXIT_OK


def main() -> None:
    """CLI entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
