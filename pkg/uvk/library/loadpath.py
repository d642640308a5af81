"""
Mapping dotted library names to `.uv` files.

A load path is an ordered list of (prefix, directory) entries and the
first entry that yields an existing file wins. A recursive entry maps
`Prefix.sub.name` to `directory/sub/name.uv`; a plain entry only maps
names one component below its prefix.
"""
from __future__ import annotations

import dataclasses
import functools
import logging
import pathlib
import typing

from uvk.errors import ModuleNameMismatch, ModuleNotFound, SourceLocation
from uvk.settings import LoadPathEntry
from uvk.syntax import surface as s
from uvk.syntax.parser import parse_file

log = logging.getLogger(__name__)

SUFFIX = ".uv"


@dataclasses.dataclass(frozen=True)
class ModuleSource:
    """A parsed library file together with the name it was found under."""

    name: str
    path: pathlib.Path
    commands: typing.Tuple[s.Command, ...]

    @property
    def declared_name(self) -> typing.Optional[str]:
        for command in self.commands:
            if isinstance(command, s.LibraryDecl):
                return command.name
        return None


def _relative_name(name: str, prefix: str) -> typing.Optional[str]:
    if not prefix:
        return name
    if name.startswith(prefix + "."):
        return name[len(prefix) + 1 :]
    return None


class LoadPath:
    def __init__(self, entries: typing.Iterable[LoadPathEntry] = ()) -> None:
        self.entries: typing.List[LoadPathEntry] = []
        for entry in entries:
            self.add(entry)

    def __repr__(self) -> str:
        inner = ", ".join(f"{e.prefix or '<root>'}={e.directory}" for e in self.entries)
        return f"{type(self).__name__}([{inner}])"

    def __iter__(self) -> typing.Iterator[LoadPathEntry]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def add(self, entry: LoadPathEntry) -> None:
        """Append `entry` unless an identical one is already present."""
        if entry not in self.entries:
            self.entries.append(entry)
            log.debug(f"Load path entry {entry.prefix or '<root>'} -> {entry.directory}")

    def candidates(self, name: str) -> typing.Iterator[pathlib.Path]:
        for entry in self.entries:
            relative = _relative_name(name, entry.prefix)
            if relative is None:
                continue
            parts = relative.split(".")
            if len(parts) > 1 and not entry.recursive:
                continue
            yield entry.directory.joinpath(*parts[:-1], parts[-1] + SUFFIX)

    def find(self, name: str) -> typing.Optional[pathlib.Path]:
        for candidate in self.candidates(name):
            if candidate.is_file():
                return candidate
        return None


@functools.lru_cache(maxsize=256)
def _read(path: pathlib.Path, mtime: float) -> typing.Tuple[s.Command, ...]:
    return tuple(parse_file(path.read_text(encoding="utf-8"), str(path)))


def read_module(path: pathlib.Path, name: typing.Optional[str] = None) -> ModuleSource:
    """Parse a library file; its name defaults to the file stem."""
    path = path.resolve()
    commands = _read(path, path.stat().st_mtime)
    source = ModuleSource(name or path.stem, path, commands)
    if name is None and source.declared_name is not None:
        source = dataclasses.replace(source, name=source.declared_name)
    return source


def resolve_module(
    name: str,
    load_path: LoadPath,
    location: typing.Optional[SourceLocation] = None,
) -> ModuleSource:
    """
    Find and parse library `name`.

    A file whose `Library` header names a different library is an error,
    even if a later load path entry would have matched.
    """
    path = load_path.find(name)
    if path is None:
        raise ModuleNotFound(name, location)
    source = read_module(path, name)
    declared = source.declared_name
    if declared is not None and declared != name:
        raise ModuleNameMismatch(declared, name, location)
    return source
