"""CLI integration."""

import functools
import json
import logging
import pathlib
import sys
from collections.abc import Sequence
from contextlib import nullcontext
from typing import Any, Callable, Optional

import click
from yaspin import yaspin
from yaspin.spinners import Spinners

from kleinring import __version__
from kleinring.catalog import build
from kleinring.cohomology import CheckResult, CheckStatus, compare, expected, tate
from kleinring.config import EngineConfig
from kleinring.errors import (
    ConfigurationError,
    KleinringError,
    ParseError,
    PrecisionExhausted,
    SemanticError,
    TranslateBoundExceeded,
    UnknownFamily,
)
from kleinring.notation import parse_spec
from kleinring.suites import SUITE_NAMES, run_suite

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_PRECISION = 3

Report = dict[str, Any]


def exit_code(error: KleinringError) -> int:
    """Exit status for an engine error."""
    if isinstance(error, (ParseError, SemanticError, ConfigurationError, TranslateBoundExceeded)):
        return EXIT_USAGE
    if isinstance(error, PrecisionExhausted):
        return EXIT_PRECISION
    return EXIT_FAILURE


def common_options(f: Callable[..., Any]) -> Callable[..., Any]:
    options = [
        click.option("--p", "p", type=int, default=2, show_default=True, help="Prime of the valuation ring."),
        click.option("--precision", type=int, default=16, show_default=True, help="Exponent N of R = Z/p^N."),
        click.option(
            "--format",
            "output_format",
            type=click.Choice(["table", "json"]),
            default="table",
            show_default=True,
        ),
        click.option("--window", type=(int, int), default=None, help="Degree window a b."),
        click.option("--out", type=click.Path(dir_okay=False), default=None, help="Also write the report to a file."),
        click.option("--verbose", is_flag=True, help="Log computations on stderr."),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _configure(p: int, precision: int, window: Optional[tuple[int, int]], verbose: bool) -> EngineConfig:
    if verbose:
        logging.basicConfig(level=logging.DEBUG, stream=sys.stderr)
    if window is None:
        return EngineConfig(p=p, precision=precision)
    low, high = window
    return EngineConfig(p=p, precision=precision, window=(low, high))


def _fail(error: KleinringError) -> None:
    click.echo(f"error: {error}", err=True)
    sys.exit(exit_code(error))


def guarded(f: Callable[..., int]) -> Callable[..., None]:
    """Map engine errors to exit codes and propagate the command's own status."""

    @functools.wraps(f)
    def wrapper(*args: Any, **kwargs: Any) -> None:
        try:
            status = f(*args, **kwargs)
        except KleinringError as e:
            _fail(e)
        else:
            sys.exit(status)

    return wrapper


def render_json(report: Report) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


def _render_checks(checks: Sequence[Report]) -> list[str]:
    lines = []
    for check in checks:
        lines.append(f"{check['status'].upper():<12} {check['name']}")
        if check["status"] != CheckStatus.PASS.value:
            lines.append(f"{'':<12}   expected: {check['expected']}")
            lines.append(f"{'':<12}   computed: {check['computed']}")
        if check["note"]:
            lines.append(f"{'':<12}   {check['note']}")
    counts = {status.value: 0 for status in CheckStatus}
    for check in checks:
        counts[check["status"]] += 1
    if checks:
        lines.append(", ".join(f"{count} {status}" for status, count in counts.items()))
    return lines


def render_table(report: Report) -> str:
    config = report["config"]
    lines = [f"p = {config['p']}, precision {config['precision']}"]
    lattice = report["lattice"]
    if lattice is not None:
        rank = lattice["vector_rank"]
        lines.append(f"lattice {lattice['spec']}, vector rank ({rank[0]}|{','.join(map(str, rank[1:]))})")
    if report["table"]:
        lines.append(f"{'n':>4}  {'free':>4}  torsion")
        for row in report["table"]:
            torsion = ",".join(map(str, row["torsion"])) or "-"
            lines.append(f"{row['n']:>4}  {row['free_rank']:>4}  {torsion}")
    lines.extend(_render_checks(report["checks"]))
    return "\n".join(lines)


def emit(report: Report, output_format: str, out: Optional[str]) -> None:
    text = render_json(report) if output_format == "json" else render_table(report)
    click.echo(text)
    if out is not None:
        pathlib.Path(out).write_text(text + "\n", encoding="utf-8")


def _status(checks: Sequence[CheckResult]) -> int:
    return EXIT_FAILURE if any(check.failed for check in checks) else 0


@click.group()
@click.version_option(__version__, prog_name="kleinring")
def main() -> None:
    """Cohomology of lattices over the Kleinian 4-ring."""


@main.command()
@click.argument("spec")
@click.option("--from", "low", type=int, default=None, help="First degree of the table.")
@click.option("--to", "high", type=int, default=None, help="Last degree of the table.")
@common_options
@guarded
def cohomology(
    spec: str,
    low: Optional[int],
    high: Optional[int],
    p: int,
    precision: int,
    output_format: str,
    window: Optional[tuple[int, int]],
    out: Optional[str],
    verbose: bool,
) -> int:
    """
    Print the Tate cohomology table of the lattice SPEC.

    **Example:**

    ```sh
    kleinring cohomology "A" --from -4 --to 4 --p 3
    ```
    """
    config = _configure(p, precision, window, verbose)
    low = config.window[0] if low is None else low
    high = config.window[1] if high is None else high
    if low > high:
        raise ConfigurationError(f"empty degree range [{low}, {high}]")
    description = parse_spec(spec, config.p)
    lattice = build(description, config)
    degrees = range(low, high + 1)
    groups = {n: tate(lattice, n) for n in degrees}
    checks = []
    try:
        checks = [compare(f"closed form n={n}", expected(description, n), groups[n]) for n in degrees]
    except UnknownFamily:
        logger.info("no closed form for %s", spec)
    report = {
        "config": config.to_dict(),
        "lattice": {"spec": spec, "vector_rank": lattice.vector_rank.to_list()},
        "table": [
            {"n": n, "free_rank": groups[n].free_rank, "torsion": list(groups[n].torsion)}
            for n in degrees
        ],
        "checks": [check.to_dict() for check in checks],
    }
    emit(report, output_format, out)
    return _status(checks)


@main.command()
@click.argument("suite", type=click.Choice(SUITE_NAMES))
@common_options
@guarded
def verify(
    suite: str,
    p: int,
    precision: int,
    output_format: str,
    window: Optional[tuple[int, int]],
    out: Optional[str],
    verbose: bool,
) -> int:
    """Run the verification suite SUITE and report every check."""
    config = _configure(p, precision, window, verbose)
    interactive = output_format == "table" and sys.stdout.isatty()
    spinner = yaspin(text=f"Running {suite}...", spinner=Spinners.dots) if interactive else nullcontext()
    with spinner as s:
        checks = run_suite(suite, config)
        if s is not None:
            s.ok("✔")
    report = {
        "config": config.to_dict(),
        "lattice": None,
        "table": [],
        "checks": [check.to_dict() for check in checks],
    }
    emit(report, output_format, out)
    return _status(checks)
