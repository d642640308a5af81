from __future__ import annotations

import dataclasses
import typing

from uvk.syntax import terms as t
from uvk.utils.numerals import numeral_value


@dataclasses.dataclass(frozen=True)
class Numeral:
    value: int

    def __str__(self) -> str:
        return f"Numeral {self.value}"


@dataclasses.dataclass(frozen=True)
class BoolVal:
    value: bool

    def __str__(self) -> str:
        return f"BoolVal {str(self.value).lower()}"


@dataclasses.dataclass(frozen=True)
class Canonical:
    def __str__(self) -> str:
        return "Canonical"


@dataclasses.dataclass(frozen=True)
class Stuck:
    """A normal form whose head is not a constructor, with what blocks it."""

    axioms: typing.FrozenSet[str] = frozenset()
    variables: typing.FrozenSet[int] = frozenset()
    opaque: typing.FrozenSet[str] = frozenset()

    @property
    def blockers(self) -> typing.FrozenSet[str]:
        return (
            self.axioms
            | self.opaque
            | frozenset(f"#{index}" for index in self.variables)
        )

    def __str__(self) -> str:
        return "Stuck{" + ", ".join(sorted(self.blockers)) + "}"


Classification = typing.Union[Numeral, BoolVal, Canonical, Stuck]

_INTRODUCTIONS = (
    t.Universe,
    t.Pi,
    t.Lam,
    t.Sigma,
    t.Pair,
    t.Unit,
    t.Tt,
    t.Empty,
    t.Bool,
    t.TrueC,
    t.FalseC,
    t.Nat,
    t.Zero,
    t.Succ,
    t.Coprod,
    t.InL,
    t.InR,
    t.Paths,
    t.Refl,
)


def blockers(term: t.Term) -> Stuck:
    """Collect every axiom, opaque constant and free variable in a normal form."""
    axioms, variables, opaque = set(), set(), set()
    for sub, depth in t.iter_subterms(term):
        if isinstance(sub, t.Axiom):
            axioms.add(sub.name)
        elif isinstance(sub, t.Const):
            opaque.add(sub.name)
        elif isinstance(sub, t.Var) and sub.index >= depth:
            variables.add(sub.index - depth)
    return Stuck(frozenset(axioms), frozenset(variables), frozenset(opaque))


def classify(normal_form: t.Term, ty: t.Term) -> Classification:
    """
    Classify a normal form by its (normalized) type.

    At `nat` only numerals count as canonical and at `bool` only the two
    literals; at other types any introduction form is `Canonical`.
    """
    if isinstance(ty, t.Nat):
        value = numeral_value(normal_form)
        return Numeral(value) if value is not None else blockers(normal_form)
    if isinstance(ty, t.Bool):
        if isinstance(normal_form, t.TrueC):
            return BoolVal(True)
        if isinstance(normal_form, t.FalseC):
            return BoolVal(False)
        return blockers(normal_form)
    if isinstance(normal_form, _INTRODUCTIONS):
        return Canonical()
    return blockers(normal_form)
