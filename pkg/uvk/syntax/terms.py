"""
Core term language.

Bound variables are de Bruijn indices: `Var(0)` is the innermost binder.
Binder names are kept for printing only and never take part in equality.
"""
from __future__ import annotations

import dataclasses
import itertools
import typing

_level_ids = itertools.count()


@dataclasses.dataclass(frozen=True)
class ConcreteLevel:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclasses.dataclass(frozen=True)
class LevelVar:
    """A universe level variable; identity is the integer id."""

    id: int = dataclasses.field(default_factory=lambda: next(_level_ids))

    def __str__(self) -> str:
        return f"u{self.id}"


LevelExpr = typing.Union[ConcreteLevel, LevelVar]


class Term:
    """Base class of the core syntax; every subclass is an immutable dataclass."""

    __slots__ = ()

    # Sub-terms in field order, and how many binders each one sits under.
    children: typing.ClassVar[typing.Tuple[str, ...]] = ()
    binders: typing.ClassVar[typing.Mapping[str, int]] = {}


def _term(*children: str, **binders: int):
    def decorate(cls):
        cls.children = children
        cls.binders = binders
        return dataclasses.dataclass(frozen=True)(cls)

    return decorate


def _name(default: str = "_"):
    return dataclasses.field(default=default, compare=False)


@_term()
class Var(Term):
    index: int


@_term()
class Universe(Term):
    level: LevelExpr


@_term("domain", "codomain", codomain=1)
class Pi(Term):
    domain: Term
    codomain: Term
    name: str = _name()


@_term("domain", "body", body=1)
class Lam(Term):
    domain: Term
    body: Term
    name: str = _name("x")


@_term("fn", "arg")
class App(Term):
    fn: Term
    arg: Term


@_term("domain", "codomain", codomain=1)
class Sigma(Term):
    domain: Term
    codomain: Term
    name: str = _name()


@_term("sigma", "fst", "snd")
class Pair(Term):
    sigma: Term
    fst: Term
    snd: Term


@_term()
class Const(Term):
    name: str


@_term()
class Axiom(Term):
    name: str


@_term()
class Hole(Term):
    pass


@_term()
class Unit(Term):
    pass


@_term()
class Tt(Term):
    pass


@_term()
class Empty(Term):
    pass


@_term()
class Bool(Term):
    pass


@_term()
class TrueC(Term):
    pass


@_term()
class FalseC(Term):
    pass


@_term()
class Nat(Term):
    pass


@_term()
class Zero(Term):
    pass


@_term("pred")
class Succ(Term):
    pred: Term


@_term("left", "right")
class Coprod(Term):
    left: Term
    right: Term


@_term("left", "right", "value")
class InL(Term):
    left: Term
    right: Term
    value: Term


@_term("left", "right", "value")
class InR(Term):
    left: Term
    right: Term
    value: Term


@_term("ty", "lhs", "rhs")
class Paths(Term):
    ty: Term
    lhs: Term
    rhs: Term


@_term("ty", "point")
class Refl(Term):
    ty: Term
    point: Term


@_term("motive", "tt_case", "scrutinee")
class ElimUnit(Term):
    motive: Term
    tt_case: Term
    scrutinee: Term


@_term("motive", "scrutinee")
class ElimEmpty(Term):
    motive: Term
    scrutinee: Term


@_term("motive", "true_case", "false_case", "scrutinee")
class ElimBool(Term):
    motive: Term
    true_case: Term
    false_case: Term
    scrutinee: Term


@_term("motive", "zero_case", "succ_case", "scrutinee")
class ElimNat(Term):
    motive: Term
    zero_case: Term
    succ_case: Term
    scrutinee: Term


@_term("motive", "inl_case", "inr_case", "scrutinee")
class ElimCoprod(Term):
    motive: Term
    inl_case: Term
    inr_case: Term
    scrutinee: Term


@_term("motive", "pair_case", "scrutinee")
class ElimSigma(Term):
    motive: Term
    pair_case: Term
    scrutinee: Term


@_term("motive", "refl_case", "path")
class ElimPaths(Term):
    """Based path induction; the motive abstracts the endpoint and the path."""

    motive: Term
    refl_case: Term
    path: Term


ELIMINATORS = (ElimUnit, ElimEmpty, ElimBool, ElimNat, ElimCoprod, ElimSigma, ElimPaths)


def scrutinee_of(term: Term) -> Term:
    """The argument an eliminator computes on."""
    return term.path if isinstance(term, ElimPaths) else term.scrutinee


def map_children(
    term: Term, fn: typing.Callable[[Term, int], Term]
) -> Term:
    """Rebuild `term` with `fn(child, binders_crossed)` applied to every sub-term."""
    if not term.children:
        return term
    changes = {}
    for field in term.children:
        child = getattr(term, field)
        new = fn(child, term.binders.get(field, 0))
        if new is not child:
            changes[field] = new
    return dataclasses.replace(term, **changes) if changes else term


def iter_subterms(term: Term) -> typing.Iterator[typing.Tuple[Term, int]]:
    """Yield every sub-term with the number of binders above it, pre-order."""
    stack = [(term, 0)]
    while stack:
        current, depth = stack.pop()
        yield current, depth
        for field in reversed(current.children):
            stack.append((getattr(current, field), depth + current.binders.get(field, 0)))


def shift(term: Term, amount: int, cutoff: int = 0) -> Term:
    if amount == 0:
        return term

    def go(t: Term, c: int) -> Term:
        if isinstance(t, Var):
            return Var(t.index + amount) if t.index >= c else t
        return map_children(t, lambda child, k: go(child, c + k))

    return go(term, cutoff)


def subst(term: Term, index: int, replacement: Term) -> Term:
    """Replace `Var(index)` by `replacement`, shifting it under binders."""

    def go(t: Term, depth: int) -> Term:
        if isinstance(t, Var):
            if t.index == index + depth:
                return shift(replacement, depth)
            return t
        return map_children(t, lambda child, k: go(child, depth + k))

    return go(term, 0)


def instantiate(body: Term, argument: Term) -> Term:
    """Beta-substitute `argument` for the outermost bound variable of `body`."""
    return shift(subst(body, 0, shift(argument, 1)), -1)


def free_indices(term: Term) -> typing.Set[int]:
    """Indices that escape `term`, relative to its own root."""
    found = set()
    for sub, depth in iter_subterms(term):
        if isinstance(sub, Var) and sub.index >= depth:
            found.add(sub.index - depth)
    return found


def is_closed(term: Term, depth: int = 0) -> bool:
    return all(index < depth for index in free_indices(term))


def occurs(term: Term, index: int) -> bool:
    return index in free_indices(term)


def constants(term: Term) -> typing.Set[str]:
    return {sub.name for sub, _ in iter_subterms(term) if isinstance(sub, Const)}


def axioms(term: Term) -> typing.Set[str]:
    return {sub.name for sub, _ in iter_subterms(term) if isinstance(sub, Axiom)}


def levels(term: Term) -> typing.Set[LevelExpr]:
    return {sub.level for sub, _ in iter_subterms(term) if isinstance(sub, Universe)}


def has_holes(term: Term) -> bool:
    return any(isinstance(sub, Hole) for sub, _ in iter_subterms(term))


def struct_eq(left: Term, right: Term) -> bool:
    """
    Structural equality up to binder names and level-variable identity.

    Two universes compare equal when both are variables or both carry the
    same concrete level.
    """
    stack = [(left, right)]
    while stack:
        a, b = stack.pop()
        if a is b:
            continue
        if type(a) is not type(b):
            return False
        if isinstance(a, Universe):
            if isinstance(a.level, LevelVar) and isinstance(b.level, LevelVar):
                continue
            if a.level != b.level:
                return False
            continue
        if isinstance(a, (Var, Const, Axiom)):
            if a != b:
                return False
            continue
        stack.extend((getattr(a, f), getattr(b, f)) for f in a.children)
    return True


def spine(term: Term) -> typing.Tuple[Term, typing.List[Term]]:
    """Split nested applications into head and arguments."""
    args = []
    while isinstance(term, App):
        args.append(term.arg)
        term = term.fn
    args.reverse()
    return term, args


def apply(head: Term, *args: Term) -> Term:
    for arg in args:
        head = App(head, arg)
    return head
