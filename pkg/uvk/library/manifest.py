"""
Manifests: ordered lists of libraries to check, with expected outcomes.

One dotted library name per line. A line may carry `strict:universe-fail`
to say the library is expected to fail on universes in strict mode (and to
check cleanly with universe checking off). `mode strict` or `mode off`
fixes the universe mode; `#` starts a comment.
"""
from __future__ import annotations

import dataclasses
import logging
import pathlib
import typing

from uvk.errors import ManifestError, UvkError
from uvk.evaluator.nbe import DEFAULT_FUEL, Strategy
from uvk.library.report import CheckReport, ManifestCheck, Outcome
from uvk.library.session import Session
from uvk.settings import LoadPathEntry
from uvk.universes import UniverseMode

log = logging.getLogger(__name__)

EXPECT_UNIVERSE_FAIL = "strict:universe-fail"


@dataclasses.dataclass(frozen=True)
class ManifestEntry:
    module: str
    strict_universe_fail: bool = False

    def expected(self, mode: UniverseMode) -> Outcome:
        if self.strict_universe_fail and mode is UniverseMode.STRICT:
            return Outcome.UNIVERSE_FAIL
        return Outcome.OK


@dataclasses.dataclass(frozen=True)
class Manifest:
    name: str
    entries: typing.Tuple[ManifestEntry, ...]
    mode: typing.Optional[UniverseMode] = None
    path: typing.Optional[pathlib.Path] = None

    def __iter__(self) -> typing.Iterator[ManifestEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def parse_manifest(text: str, name: str = "<manifest>") -> Manifest:
    entries, mode = [], None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if words[0] == "mode":
            if len(words) != 2 or words[1] not in {m.value for m in UniverseMode}:
                raise ManifestError(f"{name}:{number}: expected `mode strict` or `mode off`")
            mode = UniverseMode(words[1])
            continue
        module, *flags = words
        if not all(part.isidentifier() for part in module.split(".")):
            raise ManifestError(f"{name}:{number}: {module!r} is not a library name")
        unknown = [flag for flag in flags if flag != EXPECT_UNIVERSE_FAIL]
        if unknown:
            raise ManifestError(f"{name}:{number}: unknown flag {unknown[0]!r}")
        entries.append(ManifestEntry(module, EXPECT_UNIVERSE_FAIL in flags))
    if not entries:
        raise ManifestError(f"{name}: the manifest lists no libraries")
    return Manifest(name, tuple(entries), mode)


def load_manifest(path: pathlib.Path) -> Manifest:
    path = pathlib.Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc.strerror}") from None
    return dataclasses.replace(parse_manifest(text, path.stem), path=path)


def check_manifest(
    manifest: Manifest,
    load_path: typing.Iterable[LoadPathEntry],
    mode: typing.Optional[UniverseMode] = None,
    fuel: int = DEFAULT_FUEL,
    strategy: Strategy = Strategy.COMPUTE,
    transparent_all: bool = False,
    session: typing.Optional[Session] = None,
) -> CheckReport:
    """
    Load every listed library in order and compare outcomes with the manifest.

    `mode` overrides the manifest's own `mode` line; strict is the default.
    """
    mode = UniverseMode(mode or manifest.mode or UniverseMode.STRICT)
    if session is None:
        session = Session(mode, load_path, fuel, strategy, transparent_all)
    checks = []
    for entry in manifest:
        try:
            module = session.require(entry.module)
            actual = module.report.outcome
        except UvkError as exc:
            log.warning(f"{manifest.name}: {exc}")
            actual = Outcome.ERROR
        checks.append(
            ManifestCheck(module=entry.module, expected=entry.expected(mode), actual=actual)
        )
    report = session.report()
    report.manifest = checks
    log.info(
        f"Manifest {manifest.name}: "
        f"{sum(check.matched for check in checks)}/{len(checks)} as expected"
    )
    return report
