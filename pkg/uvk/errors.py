from __future__ import annotations

import dataclasses
import enum
import typing

if typing.TYPE_CHECKING:
    from uvk.syntax.terms import LevelExpr, Term


@dataclasses.dataclass(frozen=True)
class SourceLocation:
    """A position in a surface file, 1-based like the lexer reports it."""

    file: str = "<input>"
    line: int = 0
    column: int = 0

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


class UvkError(Exception):
    """Base class for all errors raised by the checker and its tooling."""

    def __init__(
        self, message: str, location: typing.Optional[SourceLocation] = None
    ) -> None:
        super().__init__(message)
        self.message = message
        self.location = location

    def __str__(self) -> str:
        if self.location is None:
            return self.message
        return f"{self.location}: {self.message}"

    def at(self, location: typing.Optional[SourceLocation]) -> UvkError:
        """Attach a location if the error does not carry one yet."""
        if self.location is None:
            self.location = location
        return self


class ParseError(UvkError):
    """Raised when a surface file does not match the grammar."""

    def __init__(
        self, expected: str, location: typing.Optional[SourceLocation] = None
    ) -> None:
        super().__init__(f"syntax error, expected {expected}", location)
        self.expected = expected


class ResolveError(UvkError):
    """Raised when names in a command cannot be resolved."""


class UnknownIdentifier(ResolveError):
    def __init__(
        self, name: str, location: typing.Optional[SourceLocation] = None
    ) -> None:
        super().__init__(f"unknown identifier {name!r}", location)
        self.name = name


class ArityError(ResolveError):
    """Raised when a builtin former is applied to too few arguments."""


class DuplicateName(UvkError):
    def __init__(
        self, name: str, location: typing.Optional[SourceLocation] = None
    ) -> None:
        super().__init__(f"{name!r} is already defined", location)
        self.name = name


class UniverseError(UvkError):
    """Raised in strict mode when a constraint closes a cycle through a `<` edge."""

    def __init__(
        self,
        cycle: typing.Sequence[LevelExpr],
        provenance: typing.Sequence[str] = (),
        location: typing.Optional[SourceLocation] = None,
    ) -> None:
        self.cycle = list(cycle)
        self.provenance = list(provenance)
        path = " -> ".join(str(level) for level in self.cycle)
        super().__init__(f"universe inconsistency: {path}", location)


class TypingErrorKind(enum.Enum):
    NOT_A_FUNCTION = "not-a-function"
    TYPE_MISMATCH = "type-mismatch"
    UNBOUND_INDEX = "unbound-index"
    UNIVERSE_ERROR = "universe-error"
    CANNOT_INFER_HOLE = "cannot-infer-hole"
    NOT_A_TYPE = "not-a-type"
    BAD_MOTIVE = "bad-motive"


class TypingError(UvkError):
    """Raised by the kernel; mismatches carry both sides in normal form."""

    def __init__(
        self,
        kind: TypingErrorKind,
        message: str,
        *,
        expected: typing.Optional[Term] = None,
        actual: typing.Optional[Term] = None,
        universe_error: typing.Optional[UniverseError] = None,
        location: typing.Optional[SourceLocation] = None,
    ) -> None:
        super().__init__(message, location)
        self.kind = kind
        self.expected = expected
        self.actual = actual
        self.universe_error = universe_error


class FuelExhausted(UvkError):
    """Raised when an evaluation takes more steps than its budget allows."""

    def __init__(
        self, budget: int, location: typing.Optional[SourceLocation] = None
    ) -> None:
        super().__init__(f"evaluation exceeded its budget of {budget} steps", location)
        self.budget = budget


class LibraryError(UvkError):
    """Base class for module resolution and manifest errors."""


class ModuleNotFound(LibraryError):
    def __init__(
        self, name: str, location: typing.Optional[SourceLocation] = None
    ) -> None:
        super().__init__(f"cannot find library {name} on the load path", location)
        self.name = name


class ModuleNameMismatch(LibraryError):
    def __init__(
        self,
        found: str,
        expected: str,
        location: typing.Optional[SourceLocation] = None,
    ) -> None:
        super().__init__(
            f"the file found for {expected} contains library {found}", location
        )
        self.found = found
        self.expected = expected


class DependencyError(LibraryError):
    """Raised when a required library is not registered and cannot be loaded."""


class ManifestError(LibraryError):
    """Raised for malformed manifest files."""
