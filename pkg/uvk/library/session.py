"""
Loading library files into one global environment.

A session owns the environment and its level graph. A failing command is
recorded in the file's report and loading carries on with the next one;
the kernel has already rolled the environment back to its state before
the command.
"""
from __future__ import annotations

import dataclasses
import logging
import pathlib
import time
import typing

from uvk.errors import (
    DependencyError,
    DuplicateName,
    ModuleNameMismatch,
    SourceLocation,
    TypingError,
    TypingErrorKind,
    UniverseError,
    UnknownIdentifier,
    UvkError,
)
from uvk.evaluator.classify import (
    BoolVal,
    Canonical,
    Classification,
    Numeral,
    Stuck,
    classify,
)
from uvk.evaluator.nbe import DEFAULT_FUEL, Evaluator, Strategy, quote
from uvk.kernel import checker
from uvk.kernel.env import GlobalEnv
from uvk.library.loadpath import LoadPath, ModuleSource, read_module, resolve_module
from uvk.library.report import CheckReport, EntryKind, FileReport, ReportEntry, Status
from uvk.settings import LoadPathEntry
from uvk.syntax import surface as s
from uvk.syntax import terms as t
from uvk.syntax.parser import parse_file, parse_term
from uvk.syntax.pretty import pretty
from uvk.syntax.resolve import resolve, resolve_term
from uvk.universes import UniverseMode

log = logging.getLogger(__name__)


@dataclasses.dataclass
class LoadedModule:
    name: str
    path: typing.Optional[pathlib.Path]
    definitions: typing.List[str] = dataclasses.field(default_factory=list)
    imports: typing.List[str] = dataclasses.field(default_factory=list)
    exports: typing.List[str] = dataclasses.field(default_factory=list)
    report: typing.Optional[FileReport] = None


@dataclasses.dataclass(frozen=True)
class EvalResult:
    term: t.Term
    type: t.Term
    normal_form: t.Term
    classification: Classification
    strategy: Strategy
    steps: int
    millis: float


def _millis(start: float) -> float:
    return round((time.perf_counter() - start) * 1000, 3)


def expectation_holds(expected: s.Expectation, actual: Classification) -> bool:
    match expected.kind, actual:
        case s.ExpectationKind.NUMERAL, Numeral(value):
            return value == expected.value
        case s.ExpectationKind.BOOL, BoolVal(value):
            return value == expected.value
        case s.ExpectationKind.CANONICAL, Numeral() | BoolVal() | Canonical():
            return True
        case s.ExpectationKind.STUCK, Stuck():
            return not expected.value or expected.value == actual.blockers
    return False


class Session:
    """One checking run over any number of files, sharing a single environment."""

    def __init__(
        self,
        mode: UniverseMode = UniverseMode.STRICT,
        load_path: typing.Iterable[LoadPathEntry] = (),
        fuel: int = DEFAULT_FUEL,
        strategy: Strategy = Strategy.COMPUTE,
        transparent_all: bool = False,
        autoload: bool = True,
    ) -> None:
        self.env = GlobalEnv(UniverseMode(mode))
        self.load_path = LoadPath(load_path)
        self.fuel = fuel
        self.strategy = Strategy(strategy)
        self.transparent_all = transparent_all
        self.autoload = autoload
        self.modules: typing.Dict[str, LoadedModule] = {}
        self.reports: typing.List[FileReport] = []
        self._loading: typing.List[str] = []
        # Names whose definition failed on a universe inconsistency.
        self._universe_failures: typing.Dict[str, str] = {}

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(mode={self.env.mode.value}, "
            f"modules={len(self.modules)}, definitions={len(self.env)})"
        )

    @property
    def mode(self) -> UniverseMode:
        return self.env.mode

    def report(self) -> CheckReport:
        report = CheckReport(
            universe_mode=self.mode,
            files=list(self.reports),
            levels=self.env.levels.level_count,
            constraints=self.env.levels.constraint_count,
        )
        try:
            self.env.levels.check_satisfiable()
        except UniverseError as exc:
            # Only reachable in off mode; strict mode rejects the closing edge.
            report.unsatisfied_cycle = " -> ".join(map(str, exc.cycle))
        return report

    def require(
        self, name: str, location: typing.Optional[SourceLocation] = None
    ) -> LoadedModule:
        """Make library `name` available, loading it and its dependencies if needed."""
        if name in self.modules:
            return self.modules[name]
        if name in self._loading:
            cycle = " -> ".join(self._loading[self._loading.index(name) :] + [name])
            raise DependencyError(f"circular Require: {cycle}", location)
        if not self.autoload:
            raise DependencyError(f"library {name} has not been loaded", location)
        source = resolve_module(name, self.load_path, location)
        self.load_source(source)
        return self.modules[name]

    def load_file(
        self, path: typing.Union[str, pathlib.Path], name: typing.Optional[str] = None
    ) -> FileReport:
        path = pathlib.Path(path)
        source = read_module(path, name)
        existing = self.modules.get(source.name)
        if existing is not None and existing.report is not None:
            return existing.report
        return self.load_source(source)

    def load_text(self, text: str, filename: str = "<input>") -> FileReport:
        commands = tuple(parse_file(text, filename))
        source = ModuleSource(pathlib.Path(filename).stem, pathlib.Path(filename), commands)
        if source.declared_name is not None:
            source = dataclasses.replace(source, name=source.declared_name)
        return self.load_source(source)

    def load_source(self, source: ModuleSource) -> FileReport:
        module = LoadedModule(source.name, source.path)
        report = FileReport(file=str(source.path), module=source.name)
        module.report = report
        self._loading.append(source.name)
        start = time.perf_counter()
        log.info(f"Checking {source.name}")
        try:
            for command in source.commands:
                entry = self._run(command, module, source)
                if entry is not None:
                    report.entries.append(entry)
                    if entry.status is not Status.OK:
                        log.warning(f"{entry.definition}: {entry.diagnostic}")
        finally:
            self._loading.pop()
        report.millis = _millis(start)
        report.settle()
        self.modules[source.name] = module
        self.reports.append(report)
        log.info(
            f"Checked {source.name}: {report.outcome.value}, "
            f"{len(module.definitions)} definitions in {report.millis:.0f} ms"
        )
        return report

    def visible_names(self, module: LoadedModule) -> typing.Set[str]:
        """Own definitions plus everything the module's Requires bring into scope."""
        names = set(module.definitions)
        seen: typing.Set[str] = set()
        stack = list(module.imports)
        while stack:
            current = stack.pop()
            if current in seen or current not in self.modules:
                continue
            seen.add(current)
            dependency = self.modules[current]
            names.update(dependency.definitions)
            stack.extend(dependency.exports)
        return names

    def _failure(
        self,
        entry: ReportEntry,
        exc: UvkError,
        report: typing.Optional[FileReport] = None,
    ) -> ReportEntry:
        entry.status = Status.ERROR
        entry.diagnostic = str(exc)
        if isinstance(exc, TypingError) and exc.kind is TypingErrorKind.UNIVERSE_ERROR:
            entry.status = Status.UNIVERSE_FAIL
            self._universe_failures[entry.definition] = exc.message
            if report is not None and exc.universe_error is not None:
                cycle = " -> ".join(map(str, exc.universe_error.cycle))
                origins = ", ".join(exc.universe_error.provenance)
                report.universe_cycles.append(f"{cycle} (from {origins})")
        elif isinstance(exc, UnknownIdentifier) and exc.name in self._universe_failures:
            # The missing name was rejected for universe reasons; this is the same failure.
            entry.status = Status.UNIVERSE_FAIL
            entry.diagnostic = f"{exc} (rejected: {self._universe_failures[exc.name]})"
            if entry.kind in (EntryKind.DEFINITION, EntryKind.POSTULATE):
                self._universe_failures[entry.definition] = entry.diagnostic
        return entry

    def _run(
        self, command: s.Command, module: LoadedModule, source: ModuleSource
    ) -> typing.Optional[ReportEntry]:
        file = str(source.path)
        line = command.location.line
        start = time.perf_counter()
        match command:
            case s.LibraryDecl(name):
                if name != source.name:
                    entry = ReportEntry(
                        file=file, definition=name, kind=EntryKind.LIBRARY, line=line
                    )
                    return self._failure(
                        entry, ModuleNameMismatch(name, source.name, command.location)
                    )
                return None
            case s.AddLoadPath(directory, prefix, recursive):
                base = source.path.parent if source.path else pathlib.Path.cwd()
                target = pathlib.Path(directory)
                if not target.is_absolute():
                    target = (base / target).resolve()
                self.load_path.add(
                    LoadPathEntry(prefix=prefix, directory=target, recursive=recursive)
                )
                return None
            case s.Require(name, export):
                entry = ReportEntry(
                    file=file, definition=name, kind=EntryKind.REQUIRE, line=line
                )
                try:
                    dependency = self.require(name, command.location)
                except UvkError as exc:
                    return self._failure(entry, exc)
                module.imports.append(dependency.name)
                if export:
                    module.exports.append(dependency.name)
                return None
            case s.Definition() | s.Postulate():
                return self._define(command, module, file, start)
            case s.Eval() | s.CanonicityTest():
                return self._evaluate(command, module, file, start)
        raise TypeError(f"unknown command {type(command).__name__}")

    def _define(
        self,
        command: typing.Union[s.Definition, s.Postulate],
        module: LoadedModule,
        file: str,
        start: float,
    ) -> ReportEntry:
        is_postulate = isinstance(command, s.Postulate)
        entry = ReportEntry(
            file=file,
            definition=command.name,
            kind=EntryKind.POSTULATE if is_postulate else EntryKind.DEFINITION,
            line=command.location.line,
        )
        visible = self.visible_names(module)
        try:
            if command.name in self.env:
                raise DuplicateName(command.name, command.location)
            resolved = resolve(command, self.env, visible.__contains__)
            if is_postulate:
                kernel_command = checker.Postulate(resolved.name, resolved.type)
            else:
                kernel_command = checker.Definition(
                    resolved.name, resolved.type, resolved.body, resolved.opaque
                )
            checker.register(
                self.env,
                kernel_command,
                self.fuel,
                module=module.name,
                location=command.location,
            )
        except UvkError as exc:
            entry.millis = _millis(start)
            return self._failure(entry, exc.at(command.location), module.report)
        module.definitions.append(command.name)
        entry.axioms = sorted(self.env.axioms_of(command.name))
        entry.millis = _millis(start)
        log.debug(f"{command.name} ok in {entry.millis:.1f} ms")
        return entry

    def _evaluate(
        self,
        command: typing.Union[s.Eval, s.CanonicityTest],
        module: LoadedModule,
        file: str,
        start: float,
    ) -> ReportEntry:
        is_test = isinstance(command, s.CanonicityTest)
        entry = ReportEntry(
            file=file,
            definition=f"{'CanonicityTest' if is_test else 'Eval'}@{command.location.line}",
            kind=EntryKind.CANONICITY if is_test else EntryKind.EVAL,
            line=command.location.line,
        )
        strategy = self.strategy if is_test else Strategy(command.strategy)
        try:
            resolved = resolve(command, self.env, self.visible_names(module).__contains__)
            result = self.evaluate_term(resolved.expr, strategy)
        except UvkError as exc:
            entry.millis = _millis(start)
            return self._failure(entry, exc.at(command.location))
        entry.classification = str(result.classification)
        entry.normal_form = pretty(result.normal_form)
        entry.strategy = strategy.value
        entry.steps = result.steps
        entry.axioms = sorted(t.axioms(result.normal_form))
        entry.millis = _millis(start)
        if is_test and not expectation_holds(command.expected, result.classification):
            entry.status = Status.ERROR
            entry.diagnostic = (
                f"expected {command.expected}, got {result.classification}"
            )
        return entry

    def evaluate_term(
        self, term: t.Term, strategy: typing.Optional[Strategy] = None
    ) -> EvalResult:
        """Type-check a closed term, normalize it and classify the result."""
        strategy = Strategy(strategy or self.strategy)
        start = time.perf_counter()
        elaborated, ty = checker.elaborate(self.env, checker.Context(), term, self.fuel)
        evaluator = Evaluator(self.env, strategy, self.fuel, self.transparent_all)
        normal_form = quote(evaluator.eval(elaborated), 0)
        return EvalResult(
            term=elaborated,
            type=ty,
            normal_form=normal_form,
            classification=classify(normal_form, ty),
            strategy=strategy,
            steps=evaluator.steps,
            millis=_millis(start),
        )

    def evaluate_text(
        self, text: str, strategy: typing.Optional[Strategy] = None
    ) -> EvalResult:
        """Parse, resolve and evaluate a term against every loaded definition."""
        return self.evaluate_term(resolve_term(parse_term(text), self.env), strategy)
