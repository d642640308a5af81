from __future__ import annotations

import enum
import typing

import pydantic

from uvk.universes import UniverseMode


class Status(str, enum.Enum):
    OK = "ok"
    ERROR = "error"
    UNIVERSE_FAIL = "universe-fail"


class Outcome(str, enum.Enum):
    """How a whole file fared: every failure a universe error is `universe-fail`."""

    OK = "ok"
    UNIVERSE_FAIL = "universe-fail"
    ERROR = "error"


class EntryKind(str, enum.Enum):
    DEFINITION = "definition"
    POSTULATE = "postulate"
    EVAL = "eval"
    CANONICITY = "canonicity"
    REQUIRE = "require"
    LIBRARY = "library"


class ReportEntry(pydantic.BaseModel):
    file: str
    definition: str
    kind: EntryKind = EntryKind.DEFINITION
    status: Status = Status.OK
    diagnostic: typing.Optional[str] = None
    axioms: typing.List[str] = []
    classification: typing.Optional[str] = None
    normal_form: typing.Optional[str] = None
    strategy: typing.Optional[str] = None
    steps: typing.Optional[int] = None
    millis: float = 0.0
    line: int = 0

    class Config:
        extra = pydantic.Extra.forbid
        allow_mutation = True
        validate_assignment = True


class FileReport(pydantic.BaseModel):
    file: str
    module: str
    outcome: Outcome = Outcome.OK
    entries: typing.List[ReportEntry] = []
    universe_cycles: typing.List[str] = []
    millis: float = 0.0

    class Config:
        extra = pydantic.Extra.forbid
        allow_mutation = True

    def failures(self) -> typing.List[ReportEntry]:
        return [entry for entry in self.entries if entry.status is not Status.OK]

    def settle(self) -> Outcome:
        """Derive the file outcome from its entries."""
        failures = self.failures()
        if not failures:
            self.outcome = Outcome.OK
        elif all(entry.status is Status.UNIVERSE_FAIL for entry in failures):
            self.outcome = Outcome.UNIVERSE_FAIL
        else:
            self.outcome = Outcome.ERROR
        return self.outcome

    def entry(self, name: str) -> ReportEntry:
        for entry in self.entries:
            if entry.definition == name:
                return entry
        raise KeyError(name)


class ManifestCheck(pydantic.BaseModel):
    module: str
    expected: Outcome
    actual: Outcome

    class Config:
        extra = pydantic.Extra.forbid
        allow_mutation = False

    @property
    def matched(self) -> bool:
        return self.expected is self.actual


class CheckReport(pydantic.BaseModel):
    universe_mode: UniverseMode
    files: typing.List[FileReport] = []
    manifest: typing.List[ManifestCheck] = []
    levels: int = 0
    constraints: int = 0
    unsatisfied_cycle: typing.Optional[str] = None

    class Config:
        extra = pydantic.Extra.forbid
        allow_mutation = True

    @property
    def entries(self) -> typing.List[ReportEntry]:
        return [entry for report in self.files for entry in report.entries]

    @property
    def ok(self) -> bool:
        """Clean when manifest expectations hold and every other file checked."""
        covered = {check.module for check in self.manifest}
        if not all(check.matched for check in self.manifest):
            return False
        return all(
            report.outcome is Outcome.OK for report in self.files if report.module not in covered
        )

    def file(self, module: str) -> FileReport:
        for report in self.files:
            if report.module == module:
                return report
        raise KeyError(module)

    def axioms(self) -> typing.Dict[str, typing.List[str]]:
        return {
            entry.definition: entry.axioms
            for entry in self.entries
            if entry.kind in (EntryKind.DEFINITION, EntryKind.POSTULATE)
            and entry.status is Status.OK
        }

    def summary_lines(self) -> typing.List[str]:
        lines = []
        for report in self.files:
            failures = report.failures()
            lines.append(
                f"{report.module}: {report.outcome.value} "
                f"({len(report.entries) - len(failures)}/{len(report.entries)} ok, "
                f"{report.millis:.0f} ms)"
            )
            for entry in failures:
                lines.append(f"  {entry.definition}: {entry.status.value}: {entry.diagnostic}")
            for cycle in report.universe_cycles:
                lines.append(f"  universe cycle: {cycle}")
        for check in self.manifest:
            mark = "ok" if check.matched else "MISMATCH"
            lines.append(
                f"manifest {check.module}: expected {check.expected.value}, "
                f"got {check.actual.value} [{mark}]"
            )
        lines.append(
            f"universe check {self.universe_mode.value}: "
            f"{self.levels} levels, {self.constraints} constraints"
        )
        if self.unsatisfied_cycle is not None:
            lines.append(f"  unsatisfiable: {self.unsatisfied_cycle}")
        return lines
