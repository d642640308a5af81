from __future__ import annotations

import dataclasses
import logging
import typing

from uvk.errors import DuplicateName, SourceLocation, UnknownIdentifier
from uvk.syntax import terms as t
from uvk.universes import LevelGraph, UniverseMode

log = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class GlobalEntry:
    """A checked definition, or a postulate when `body` is None."""

    name: str
    type: t.Term
    body: typing.Optional[t.Term] = None
    opaque: bool = False
    module: typing.Optional[str] = None
    location: typing.Optional[SourceLocation] = None

    @property
    def is_postulate(self) -> bool:
        return self.body is None


class GlobalEnv:
    """The definitions a session has accepted, in order, plus its level graph."""

    def __init__(
        self,
        mode: UniverseMode = UniverseMode.STRICT,
        levels: typing.Optional[LevelGraph] = None,
    ) -> None:
        self.levels = levels if levels is not None else LevelGraph(mode)
        self._entries: typing.Dict[str, GlobalEntry] = {}
        self._axioms: typing.Dict[str, typing.FrozenSet[str]] = {}
        self._position: typing.Dict[str, int] = {}

    def __repr__(self) -> str:
        return f"{type(self).__name__}(entries={len(self)}, levels={self.levels!r})"

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> typing.Iterator[GlobalEntry]:
        return iter(self._entries.values())

    @property
    def mode(self) -> UniverseMode:
        return self.levels.mode

    def names(self) -> typing.List[str]:
        return list(self._entries)

    def lookup(self, name: str) -> GlobalEntry:
        try:
            return self._entries[name]
        except KeyError:
            raise UnknownIdentifier(name) from None

    def add(self, entry: GlobalEntry) -> None:
        if entry.name in self._entries:
            raise DuplicateName(entry.name, entry.location)
        self._position[entry.name] = len(self._entries)
        self._entries[entry.name] = entry
        log.debug(f"Registered {entry.name}")

    def snapshot(self) -> GlobalEnv:
        """An independent copy sharing the immutable entries."""
        clone = type(self)(levels=self.levels.copy())
        clone._entries = dict(self._entries)
        clone._axioms = dict(self._axioms)
        clone._position = dict(self._position)
        return clone

    def axioms_of(self, name: str) -> typing.FrozenSet[str]:
        """Every postulate `name` depends on, opaque bodies included."""
        if name in self._axioms:
            return self._axioms[name]
        pending, seen, stack = [], set(), [name]
        while stack:
            current = stack.pop()
            if current in seen or current in self._axioms:
                continue
            seen.add(current)
            pending.append(current)
            stack.extend(self._dependencies(self.lookup(current)))
        # Definitions only mention earlier ones, so registration order is a
        # valid evaluation order for the memo.
        pending.sort(key=self._position.__getitem__)
        for current in pending:
            entry = self.lookup(current)
            found = set(t.axioms(entry.type))
            if entry.is_postulate:
                found.add(current)
            else:
                found |= t.axioms(entry.body)
            for dependency in self._dependencies(entry):
                found |= self._axioms[dependency]
            self._axioms[current] = frozenset(found)
        return self._axioms[name]

    @staticmethod
    def _dependencies(entry: GlobalEntry) -> typing.Set[str]:
        names = t.constants(entry.type)
        if entry.body is not None:
            names |= t.constants(entry.body)
        return names
