"""
Command line front end.

    uvk check [OPTIONS] TARGET...     check .uv files, manifests or tier names
    uvk manifest [OPTIONS] FILE       check one manifest
    uvk eval [OPTIONS] EXPR           normalize and classify a closed term
    uvk canonicity [OPTIONS]          run the generated canonicity corpus

Exit codes: 0 success, 1 check failure or violated expectation, 2 I/O and
load path errors, 3 fuel exhausted during `eval`.
"""
from __future__ import annotations

import contextlib
import dataclasses
import enum
import json
import logging
import pathlib
import typing

import click

from uvk.canonicity import CorpusConfig, corpus_env, run_canonicity
from uvk.errors import FuelExhausted, LibraryError, UvkError
from uvk.evaluator.nbe import Strategy
from uvk.library.manifest import Manifest, check_manifest, load_manifest
from uvk.library.report import CheckReport
from uvk.library.session import Session
from uvk.settings import LoadPathEntry, parse_load_path_entry, settings
from uvk.syntax.pretty import pretty
from uvk.universes import UniverseMode

log = logging.getLogger(__name__)


class ExitCode(enum.IntEnum):
    OK = 0
    FAILURE = 1
    IO = 2
    FUEL = 3


class OutputFormat(str, enum.Enum):
    HUMAN = "human"
    JSON = "json"


@dataclasses.dataclass(frozen=True)
class CliConfig:
    """Settings merged with command line flags; flags win."""

    universe_check: UniverseMode = UniverseMode.STRICT
    load_path: typing.Tuple[LoadPathEntry, ...] = ()
    strategy: Strategy = Strategy.COMPUTE
    fuel: int = settings.kernel.fuel
    transparent_all: bool = False
    output: OutputFormat = OutputFormat.HUMAN

    @classmethod
    def from_flags(
        cls,
        universe_check: typing.Optional[str] = None,
        load_path: typing.Sequence[LoadPathEntry] = (),
        strategy: typing.Optional[str] = None,
        fuel: typing.Optional[int] = None,
        transparent_all: bool = False,
        json_output: bool = False,
    ) -> CliConfig:
        kernel = settings.kernel
        return cls(
            universe_check=UniverseMode(universe_check or kernel.universe_check),
            # UVK_LOAD_PATH only applies when no --load-path flag was given.
            load_path=tuple(load_path) + tuple(settings.load_path(fallback=not load_path)),
            strategy=Strategy(strategy or kernel.strategy),
            fuel=fuel or kernel.fuel,
            transparent_all=transparent_all or kernel.transparent_all,
            output=OutputFormat.JSON if json_output else OutputFormat.HUMAN,
        )

    def session(self, mode: typing.Optional[UniverseMode] = None) -> Session:
        return Session(
            mode or self.universe_check,
            self.load_path,
            self.fuel,
            self.strategy,
            self.transparent_all,
        )


def _load_path_option(
    ctx: click.Context, param: click.Parameter, values: typing.Sequence[str]
) -> typing.List[LoadPathEntry]:
    try:
        return [parse_load_path_entry(value) for value in values]
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


def kernel_options(command: typing.Callable) -> typing.Callable:
    """Flags shared by every subcommand that runs the kernel."""
    options = [
        click.option(
            "--universe-check",
            type=click.Choice([mode.value for mode in UniverseMode]),
            default=None,
            help="Universe consistency checking (default: strict).",
        ),
        click.option(
            "--load-path",
            "load_path",
            multiple=True,
            callback=_load_path_option,
            metavar="PREFIX=DIR",
            help="Map a library prefix to a directory; repeatable, searched in order.",
        ),
        click.option(
            "--strategy",
            type=click.Choice([strategy.value for strategy in Strategy]),
            default=None,
            help="Reduction strategy for evaluation (default: compute).",
        ),
        click.option("--fuel", type=click.IntRange(min=1), default=None),
        click.option(
            "--transparent-all",
            is_flag=True,
            help="Unfold opaque definitions during evaluation.",
        ),
        click.option("--json", "json_output", is_flag=True, help="Emit JSON on stdout."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def _fail(message: str, code: ExitCode) -> typing.NoReturn:
    click.echo(f"error: {message}", err=True)
    raise click.exceptions.Exit(int(code))


@contextlib.contextmanager
def _exit_codes() -> typing.Iterator[None]:
    try:
        yield
    except FuelExhausted as exc:
        _fail(str(exc), ExitCode.FUEL)
    except LibraryError as exc:
        _fail(str(exc), ExitCode.IO)
    except OSError as exc:
        _fail(f"{exc.filename}: {exc.strerror}", ExitCode.IO)
    except UvkError as exc:
        _fail(str(exc), ExitCode.FAILURE)


def _manifest_for(target: str) -> typing.Optional[Manifest]:
    """A tier name or a `.txt` path names a manifest; anything else is a file."""
    if target in settings.library.manifests:
        return load_manifest(settings.library.manifests[target])
    if target.endswith(".txt"):
        return load_manifest(pathlib.Path(target))
    return None


def check_targets(
    config: CliConfig, targets: typing.Sequence[str], mode_from_flag: bool = False
) -> CheckReport:
    """Check every target in one session; a manifest `mode` line wins unless flagged."""
    manifests = {target: _manifest_for(target) for target in targets}
    files = [pathlib.Path(target) for target, found in manifests.items() if found is None]
    for path in files:
        if not path.is_file():
            raise FileNotFoundError(2, "no such file", str(path))
    mode = config.universe_check
    if not mode_from_flag:
        mode = next((m.mode for m in manifests.values() if m and m.mode), mode)
    session = config.session(mode)
    checks = []
    for target, manifest in manifests.items():
        if manifest is None:
            session.load_file(pathlib.Path(target))
            continue
        checked = check_manifest(
            manifest,
            config.load_path,
            mode,
            config.fuel,
            config.strategy,
            config.transparent_all,
            session=session,
        )
        checks.extend(checked.manifest)
    report = session.report()
    report.manifest = checks
    return report


def _print_report(report: CheckReport, config: CliConfig, show_axioms: bool) -> None:
    if config.output is OutputFormat.JSON:
        click.echo(report.json(indent=2))
        return
    for line in report.summary_lines():
        click.echo(line)
    if show_axioms:
        for name, axioms in report.axioms().items():
            click.echo(f"{name}: {', '.join(axioms) if axioms else '(none)'}")


def _run_check(
    config: CliConfig,
    targets: typing.Sequence[str],
    show_axioms: bool,
    mode_from_flag: bool = False,
) -> None:
    with _exit_codes():
        report = check_targets(config, targets, mode_from_flag)
    _print_report(report, config, show_axioms)
    if not report.ok:
        raise click.exceptions.Exit(int(ExitCode.FAILURE))


@click.group()
@click.version_option(package_name="uvk")
def cli() -> None:
    """A small dependent type checker with Luo-style universes."""


@cli.command()
@click.argument("targets", nargs=-1, required=True)
@kernel_options
@click.option("--axioms", "show_axioms", is_flag=True, help="List axiom sets per definition.")
def check(targets: typing.Tuple[str, ...], show_axioms: bool, **flags: typing.Any) -> None:
    """Check .uv files, manifest files and named tiers in one session."""
    _run_check(
        CliConfig.from_flags(**flags),
        targets,
        show_axioms,
        mode_from_flag=flags["universe_check"] is not None,
    )


@cli.command()
@click.argument("path", type=click.Path(dir_okay=False))
@kernel_options
@click.option("--axioms", "show_axioms", is_flag=True, help="List axiom sets per definition.")
def manifest(path: str, show_axioms: bool, **flags: typing.Any) -> None:
    """Check the libraries a manifest lists against its expected outcomes."""
    config = CliConfig.from_flags(**flags)
    with _exit_codes():
        loaded = load_manifest(pathlib.Path(path))
    mode = UniverseMode(flags["universe_check"] or loaded.mode or config.universe_check)
    with _exit_codes():
        report = check_manifest(
            loaded,
            config.load_path,
            mode,
            config.fuel,
            config.strategy,
            config.transparent_all,
        )
    _print_report(report, config, show_axioms)
    if not report.ok:
        raise click.exceptions.Exit(int(ExitCode.FAILURE))


def _load_library(session: Session, config: CliConfig, name: str) -> None:
    loaded = _manifest_for(name)
    if loaded is None:
        session.require(name)
        return
    check_manifest(
        loaded,
        config.load_path,
        session.mode,
        config.fuel,
        config.strategy,
        config.transparent_all,
        session=session,
    )


@cli.command("eval")
@click.argument("expr")
@click.option(
    "--lib",
    "libraries",
    multiple=True,
    help="Tier name, manifest file or library to load first; repeatable.",
)
@click.option("--normal-only", is_flag=True, help="Print only the normal form.")
@kernel_options
def eval_(
    expr: str, libraries: typing.Tuple[str, ...], normal_only: bool, **flags: typing.Any
) -> None:
    """Normalize EXPR and report its classification."""
    config = CliConfig.from_flags(**flags)
    session = config.session()
    with _exit_codes():
        for name in libraries:
            _load_library(session, config, name)
        result = session.evaluate_text(expr, config.strategy)
    normal_form = pretty(result.normal_form)
    if config.output is OutputFormat.JSON:
        payload = {
            "normal_form": normal_form,
            "type": pretty(result.type),
            "classification": str(result.classification),
            "strategy": result.strategy.value,
            "steps": result.steps,
            "millis": result.millis,
        }
        click.echo(json.dumps(payload, indent=2))
    elif normal_only:
        click.echo(normal_form)
    else:
        click.echo(normal_form)
        click.echo(f"  : {pretty(result.type)}")
        click.echo(f"  {result.classification}")
        click.echo(f"  {result.steps} steps ({result.strategy.value}, {result.millis:.1f} ms)")


@cli.command()
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--size", type=click.IntRange(min=0), default=500, show_default=True)
@click.option("--depth", type=click.IntRange(min=0), default=4, show_default=True)
@click.option(
    "--inject-axioms",
    type=click.IntRange(min=0),
    default=0,
    help="Number of terms blocked on a postulated nat.",
)
@click.option("--fuel", type=click.IntRange(min=1), default=None)
@click.option("--json", "json_output", is_flag=True, help="Emit JSON on stdout.")
def canonicity(
    seed: int,
    size: int,
    depth: int,
    inject_axioms: int,
    fuel: typing.Optional[int],
    json_output: bool,
) -> None:
    """Normalize a generated corpus of closed nat terms under both strategies."""
    config = CliConfig.from_flags(fuel=fuel, json_output=json_output)
    corpus = CorpusConfig(seed=seed, size=size, depth=depth, inject_axioms=inject_axioms)
    summary = run_canonicity(corpus, config.fuel, corpus_env(config.universe_check))
    if config.output is OutputFormat.JSON:
        click.echo(json.dumps(summary.as_dict(), indent=2))
    else:
        click.echo(f"terms          {summary.total}")
        click.echo(f"numerals       {summary.numerals}")
        click.echo(f"stuck          {summary.stuck}")
        click.echo(f"disagreements  {summary.disagreements}")
        click.echo(f"errors         {summary.errors}")
        for outcome in summary.violations:
            detail = outcome.error or outcome.classification
            click.echo(f"violation #{outcome.index}: {detail}")
        passed = summary.total - len(summary.violations)
        click.echo(f"{passed}/{summary.total} passed in {summary.millis:.0f} ms")
    if summary.violations:
        raise click.exceptions.Exit(int(ExitCode.FAILURE))
