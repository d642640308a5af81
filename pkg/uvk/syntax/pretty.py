"""Print core terms back in surface syntax."""
from __future__ import annotations

import typing

from uvk.syntax import terms as t
from uvk.utils.numerals import numeral_value

KEYWORDS = frozenset(
    {
        "forall",
        "fun",
        "let",
        "in",
        "Definition",
        "Opaque",
        "Postulate",
        "Axiom",
        "Eval",
        "Require",
        "Import",
        "Export",
        "Add",
        "Rec",
        "LoadPath",
        "as",
        "CanonicityTest",
        "expect",
        "Library",
    }
)

BUILTIN_NAMES = frozenset(
    {
        "nat",
        "bool",
        "unit",
        "empty",
        "true",
        "false",
        "tt",
        "O",
        "S",
        "coprod",
        "inl",
        "inr",
        "paths",
        "idpath",
        "total2",
        "tpair",
        "unit_rect",
        "empty_rect",
        "bool_rect",
        "nat_rect",
        "coprod_rect",
        "total2_rect",
        "paths_rect",
    }
)

_ATOM_NAMES = {
    t.Unit: "unit",
    t.Tt: "tt",
    t.Empty: "empty",
    t.Bool: "bool",
    t.TrueC: "true",
    t.FalseC: "false",
    t.Nat: "nat",
}

_FORMERS = {
    t.Succ: "S",
    t.Coprod: "coprod",
    t.InL: "inl",
    t.InR: "inr",
    t.Paths: "paths",
    t.Refl: "idpath",
    t.ElimUnit: "unit_rect",
    t.ElimEmpty: "empty_rect",
    t.ElimBool: "bool_rect",
    t.ElimNat: "nat_rect",
    t.ElimCoprod: "coprod_rect",
    t.ElimSigma: "total2_rect",
    t.ElimPaths: "paths_rect",
}

# Precedence of the context a term is printed in.
BINDER, ARROW_LEFT, ARGUMENT = 0, 1, 2


class _Printer:
    def __init__(self, reserved: typing.Set[str]) -> None:
        self.reserved = reserved

    def fresh(self, hint: str, names: typing.Sequence[str]) -> str:
        base = hint if hint and hint != "_" else "x"
        base = base.rstrip("0123456789") or "x"
        taken = set(names) | self.reserved
        if hint not in taken and hint != "_":
            return hint
        if base not in taken:
            return base
        suffix = 0
        while f"{base}{suffix}" in taken:
            suffix += 1
        return f"{base}{suffix}"

    def binder_name(self, hint: str, body: t.Term, names: typing.Sequence[str]) -> str:
        if not t.occurs(body, 0):
            return "_"
        return self.fresh(hint, names)

    def show(self, term: t.Term, names: typing.List[str], prec: int) -> str:
        match term:
            case t.Var(index):
                if index < len(names):
                    return names[len(names) - 1 - index]
                return f"#{index - len(names)}"
            case t.Universe(t.ConcreteLevel(value)):
                return f"UU{value}"
            case t.Universe():
                return "UU"
            case t.Const(name) | t.Axiom(name):
                return name
            case t.Hole():
                return "_"
            case t.Zero() | t.Succ():
                value = numeral_value(term)
                if value is not None:
                    return str(value)
            case t.Pi(domain, codomain, name):
                if not t.occurs(codomain, 0):
                    text = (
                        f"{self.show(domain, names, ARROW_LEFT)} -> "
                        f"{self.show(codomain, names + ['_'], BINDER)}"
                    )
                else:
                    binder = self.fresh(name, names)
                    text = (
                        f"forall {binder} : {self.show(domain, names, BINDER)}, "
                        f"{self.show(codomain, names + [binder], BINDER)}"
                    )
                return text if prec == BINDER else f"({text})"
            case t.Lam(domain, body, name):
                binder = self.binder_name(name, body, names)
                annotation = (
                    "" if isinstance(domain, t.Hole)
                    else f" : {self.show(domain, names, BINDER)}"
                )
                text = f"fun {binder}{annotation} => {self.show(body, names + [binder], BINDER)}"
                return text if prec == BINDER else f"({text})"
            case t.Sigma():
                return self.application("total2", [self.family(term, names)], prec)
            case t.Pair(sigma, fst, snd):
                family = self.family(sigma, names) if isinstance(sigma, t.Sigma) else "_"
                return self.application(
                    "tpair",
                    [family, self.show(fst, names, ARGUMENT), self.show(snd, names, ARGUMENT)],
                    prec,
                )
        atom = _ATOM_NAMES.get(type(term))
        if atom is not None:
            return atom
        if isinstance(term, t.App):
            head, args = t.spine(term)
            return self.application(
                self.show(head, names, ARGUMENT),
                [self.show(arg, names, ARGUMENT) for arg in args],
                prec,
            )
        former = _FORMERS.get(type(term))
        if former is None:
            raise TypeError(f"cannot print {type(term).__name__}")
        args = [self.show(getattr(term, field), names, ARGUMENT) for field in term.children]
        return self.application(former, args, prec)

    def family(self, sigma: t.Sigma, names: typing.List[str]) -> str:
        binder = self.binder_name(sigma.name, sigma.codomain, names)
        return (
            f"(fun {binder} : {self.show(sigma.domain, names, BINDER)} => "
            f"{self.show(sigma.codomain, names + [binder], BINDER)})"
        )

    @staticmethod
    def application(head: str, args: typing.Sequence[str], prec: int) -> str:
        text = " ".join([head, *args])
        return f"({text})" if prec == ARGUMENT else text


def pretty(term: t.Term, names: typing.Sequence[str] = ()) -> str:
    """
    Render `term` so that parsing and resolving the text gives it back.

    `names` are the context's binder names, outermost first. Bound names
    are freshened against the context, the globals the term mentions and
    the builtins.
    """
    reserved = set(KEYWORDS) | BUILTIN_NAMES | t.constants(term) | t.axioms(term)
    return _Printer(reserved).show(term, list(names), BINDER)
