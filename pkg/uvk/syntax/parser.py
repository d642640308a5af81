"""
Parser for `.uv` files.

The grammar is LALR with lark's contextual lexer, so words such as
`compute`, `in` or `expect` are keywords only where the grammar expects
them and remain usable as identifiers elsewhere.
"""
from __future__ import annotations

import functools
import logging
import typing

import lark
from lark import Token, v_args

from uvk.errors import ParseError, SourceLocation
from uvk.syntax import surface as s

log = logging.getLogger(__name__)

GRAMMAR = r"""
start: command*
term_entry: term

?command: "Definition" definition_body                  -> definition
        | "Opaque" "Definition" definition_body         -> opaque_definition
        | postulate_keyword IDENT binder_group* ":" term "."   -> postulate
        | "Eval" strategy "in" term "."                  -> eval_command
        | "Require" require_kind DOTTED_NAME "."         -> require
        | "Add" rec_flag "LoadPath" ESCAPED_STRING "as" DOTTED_NAME "."  -> add_loadpath
        | "CanonicityTest" term "expect" expectation "." -> canonicity_test
        | "Library" DOTTED_NAME "."                      -> library_decl

definition_body: IDENT binder_group* [":" term] ":=" term "."

!postulate_keyword: "Postulate" | "Axiom"
!strategy: "compute" | "lazy"
!require_kind: "Export" | "Import"
!rec_flag: "Rec"?

expectation: NUMBER                 -> expect_numeral
           | IDENT                  -> expect_named
           | IDENT "{" IDENT* "}"   -> expect_stuck

?term: "forall" binders "," term                       -> forall_term
     | "fun" binders "=>" term                         -> fun_term
     | "let" binder_name [":" term] ":=" term "in" term -> let_term
     | arrow

?arrow: application "->" term  -> arrow_term
      | application

?application: application atom  -> app
            | atom

?atom: IDENT        -> ident
     | NUMBER       -> numeral
     | UNIVERSE     -> universe
     | HOLE         -> hole
     | "(" term ")"

binders: binder_name+ [":" term]  -> bare_binders
       | binder_group+            -> grouped_binders

binder_group: "(" binder_name+ ":" term ")"

?binder_name: IDENT | HOLE

UNIVERSE.2: /UU[0-9]*(?![A-Za-z0-9_'])/
HOLE: "_"
IDENT: /[A-Za-z_][A-Za-z0-9_']*/
DOTTED_NAME: /[A-Za-z_][A-Za-z0-9_']*(\.[A-Za-z_][A-Za-z0-9_']*)*/
NUMBER: /[0-9]+/
COMMENT: /\(\*[\s\S]*?\*\)/

%import common.ESCAPED_STRING
%import common.WS
%ignore WS
%ignore COMMENT
"""


@v_args(meta=True)
class _ToSurface(lark.Transformer):
    def __init__(self, filename: str) -> None:
        super().__init__()
        self.filename = filename

    def _loc(self, meta) -> SourceLocation:
        return SourceLocation(
            self.filename, getattr(meta, "line", 0), getattr(meta, "column", 0)
        )

    def _token_loc(self, token: Token) -> SourceLocation:
        return SourceLocation(self.filename, token.line or 0, token.column or 0)

    def _binder(self, name: Token, ty: typing.Optional[s.SExpr]) -> s.Binder:
        return s.Binder(str(name), ty, self._token_loc(name))

    def start(self, meta, children):
        return list(children)

    def term_entry(self, meta, children):
        return children[0]

    def definition_body(self, meta, children):
        name, *binder_groups, ty, body = children
        binders = tuple(b for group in binder_groups for b in group)
        return str(name), binders, ty, body

    def definition(self, meta, children):
        name, binders, ty, body = children[0]
        return s.Definition(name, binders, ty, body, False, self._loc(meta))

    def opaque_definition(self, meta, children):
        name, binders, ty, body = children[0]
        return s.Definition(name, binders, ty, body, True, self._loc(meta))

    def postulate(self, meta, children):
        _, name, *binder_groups, ty = children
        binders = tuple(b for group in binder_groups for b in group)
        return s.Postulate(str(name), binders, ty, self._loc(meta))

    def postulate_keyword(self, meta, children):
        return str(children[0])

    def strategy(self, meta, children):
        return str(children[0])

    def require_kind(self, meta, children):
        return str(children[0]) == "Export"

    def rec_flag(self, meta, children):
        return bool(children)

    def eval_command(self, meta, children):
        strategy, expr = children
        return s.Eval(strategy, expr, self._loc(meta))

    def require(self, meta, children):
        export, name = children
        return s.Require(str(name), export, self._loc(meta))

    def add_loadpath(self, meta, children):
        recursive, directory, prefix = children
        return s.AddLoadPath(
            str(directory)[1:-1], str(prefix), recursive, self._loc(meta)
        )

    def canonicity_test(self, meta, children):
        expr, expected = children
        return s.CanonicityTest(expr, expected, self._loc(meta))

    def library_decl(self, meta, children):
        return s.LibraryDecl(str(children[0]), self._loc(meta))

    def expect_numeral(self, meta, children):
        return s.Expectation(s.ExpectationKind.NUMERAL, int(children[0]))

    def expect_named(self, meta, children):
        word = str(children[0])
        if word in ("true", "false"):
            return s.Expectation(s.ExpectationKind.BOOL, word == "true")
        if word == "canonical":
            return s.Expectation(s.ExpectationKind.CANONICAL)
        if word == "stuck":
            return s.Expectation(s.ExpectationKind.STUCK, frozenset())
        raise ParseError(
            "a numeral, true, false, canonical or stuck", self._token_loc(children[0])
        )

    def expect_stuck(self, meta, children):
        word, *names = children
        if str(word) != "stuck":
            raise ParseError("`stuck` before a list of blockers", self._token_loc(word))
        return s.Expectation(s.ExpectationKind.STUCK, frozenset(map(str, names)))

    def forall_term(self, meta, children):
        binders, body = children
        return s.SForall(binders, body, self._loc(meta))

    def fun_term(self, meta, children):
        binders, body = children
        return s.SFun(binders, body, self._loc(meta))

    def let_term(self, meta, children):
        name, ty, value, body = children
        return s.SLet(str(name), ty, value, body, self._loc(meta))

    def arrow_term(self, meta, children):
        domain, codomain = children
        return s.SArrow(domain, codomain, self._loc(meta))

    def app(self, meta, children):
        fn, arg = children
        return s.SApp(fn, arg, self._loc(meta))

    def ident(self, meta, children):
        token = children[0]
        return s.SIdent(str(token), self._token_loc(token))

    def numeral(self, meta, children):
        token = children[0]
        return s.SNumeral(int(token), self._token_loc(token))

    def universe(self, meta, children):
        token = children[0]
        digits = str(token)[2:]
        return s.SUniverse(int(digits) if digits else None, self._token_loc(token))

    def hole(self, meta, children):
        return s.SHole(self._token_loc(children[0]))

    def bare_binders(self, meta, children):
        *names, ty = children
        return tuple(self._binder(name, ty) for name in names)

    def grouped_binders(self, meta, children):
        return tuple(b for group in children for b in group)

    def binder_group(self, meta, children):
        *names, ty = children
        return tuple(self._binder(name, ty) for name in names)


@functools.lru_cache(maxsize=None)
def _parser() -> lark.Lark:
    log.debug("Building the surface grammar")
    return lark.Lark(
        GRAMMAR,
        parser="lalr",
        lexer="contextual",
        start=["start", "term_entry"],
        propagate_positions=True,
        maybe_placeholders=True,
    )


def _describe_expected(expected: typing.Iterable[str]) -> str:
    names = sorted(expected)
    if not names:
        return "end of input"
    if len(names) > 6:
        return ", ".join(names[:6]) + ", ..."
    return ", ".join(names)


def _parse(text: str, filename: str, start: str):
    try:
        tree = _parser().parse(text, start=start)
    except lark.exceptions.UnexpectedToken as exc:
        location = SourceLocation(filename, exc.line, exc.column)
        raise ParseError(
            f"{_describe_expected(exc.expected)} before {exc.token!r}", location
        ) from None
    except lark.exceptions.UnexpectedCharacters as exc:
        location = SourceLocation(filename, exc.line, exc.column)
        raise ParseError(
            f"{_describe_expected(exc.allowed or ())} at {text[exc.pos_in_stream]!r}",
            location,
        ) from None
    except lark.exceptions.UnexpectedEOF as exc:
        raise ParseError(
            _describe_expected(exc.expected), SourceLocation(filename)
        ) from None
    try:
        return _ToSurface(filename).transform(tree)
    except lark.exceptions.VisitError as exc:
        if isinstance(exc.orig_exc, ParseError):
            raise exc.orig_exc from None
        raise


def parse_file(text: str, filename: str = "<input>") -> typing.List[s.Command]:
    """Parse a whole `.uv` file into surface commands."""
    return _parse(text, filename, "start")


def parse_term(text: str, filename: str = "<input>") -> s.SExpr:
    return _parse(text, filename, "term_entry")
