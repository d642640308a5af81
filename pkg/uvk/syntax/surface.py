"""
Surface syntax: what the parser produces before names are resolved.

Commands are shared between the parsed and the resolved stage; resolution
replaces the `SExpr` fields of a command with core terms.
"""
from __future__ import annotations

import dataclasses
import enum
import typing

from uvk.errors import SourceLocation
from uvk.syntax.terms import Term

NO_LOCATION = SourceLocation()


@dataclasses.dataclass(frozen=True)
class SExpr:
    pass


@dataclasses.dataclass(frozen=True)
class SIdent(SExpr):
    name: str
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class SNumeral(SExpr):
    value: int
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class SUniverse(SExpr):
    """`UU` when `level` is None, `UU<n>` otherwise."""

    level: typing.Optional[int] = None
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class SHole(SExpr):
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class SApp(SExpr):
    fn: SExpr
    arg: SExpr
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class SArrow(SExpr):
    domain: SExpr
    codomain: SExpr
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class Binder:
    name: str
    type: typing.Optional[SExpr] = None
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class SForall(SExpr):
    binders: typing.Tuple[Binder, ...]
    body: SExpr
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class SFun(SExpr):
    binders: typing.Tuple[Binder, ...]
    body: SExpr
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class SLet(SExpr):
    name: str
    type: typing.Optional[SExpr]
    value: SExpr
    body: SExpr
    location: SourceLocation = NO_LOCATION


Expr = typing.Union[SExpr, Term]


@dataclasses.dataclass(frozen=True)
class Command:
    pass


@dataclasses.dataclass(frozen=True)
class Definition(Command):
    name: str
    binders: typing.Tuple[Binder, ...]
    type: typing.Optional[Expr]
    body: Expr
    opaque: bool = False
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class Postulate(Command):
    name: str
    binders: typing.Tuple[Binder, ...]
    type: Expr
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class Eval(Command):
    strategy: str
    expr: Expr
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class Require(Command):
    module: str
    export: bool = False
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class AddLoadPath(Command):
    directory: str
    prefix: str
    recursive: bool = False
    location: SourceLocation = NO_LOCATION


class ExpectationKind(str, enum.Enum):
    NUMERAL = "numeral"
    BOOL = "bool"
    CANONICAL = "canonical"
    STUCK = "stuck"


@dataclasses.dataclass(frozen=True)
class Expectation:
    """The classification a `CanonicityTest` command asserts."""

    kind: ExpectationKind
    value: typing.Union[int, bool, typing.FrozenSet[str], None] = None

    def __str__(self) -> str:
        if self.kind is ExpectationKind.NUMERAL:
            return str(self.value)
        if self.kind is ExpectationKind.BOOL:
            return str(self.value).lower()
        if self.kind is ExpectationKind.STUCK and self.value:
            return "stuck {" + " ".join(sorted(self.value)) + "}"
        return self.kind.value


@dataclasses.dataclass(frozen=True)
class CanonicityTest(Command):
    expr: Expr
    expected: Expectation
    location: SourceLocation = NO_LOCATION


@dataclasses.dataclass(frozen=True)
class LibraryDecl(Command):
    name: str
    location: SourceLocation = NO_LOCATION
