"""
Name resolution: surface expressions to core terms.

Local binders become de Bruijn indices, globals become `Const` or `Axiom`
nodes, numerals become `Succ` chains and the builtin formers are
recognized by name unless a local binder shadows them.
"""
from __future__ import annotations

import dataclasses
import typing

from uvk.errors import ArityError, ResolveError, SourceLocation, UnknownIdentifier
from uvk.syntax import surface as s
from uvk.syntax import terms as t
from uvk.utils.numerals import ordinal_number, to_numeral

if typing.TYPE_CHECKING:
    from uvk.kernel.env import GlobalEnv

NULLARY: typing.Mapping[str, typing.Callable[[], t.Term]] = {
    "nat": t.Nat,
    "bool": t.Bool,
    "unit": t.Unit,
    "empty": t.Empty,
    "true": t.TrueC,
    "false": t.FalseC,
    "tt": t.Tt,
    "O": t.Zero,
}

FORMERS: typing.Mapping[str, typing.Tuple[int, typing.Callable[..., t.Term]]] = {
    "S": (1, t.Succ),
    "coprod": (2, t.Coprod),
    "inl": (3, t.InL),
    "inr": (3, t.InR),
    "paths": (3, t.Paths),
    "idpath": (2, t.Refl),
    "unit_rect": (3, t.ElimUnit),
    "empty_rect": (2, t.ElimEmpty),
    "bool_rect": (4, t.ElimBool),
    "nat_rect": (4, t.ElimNat),
    "coprod_rect": (4, t.ElimCoprod),
    "total2_rect": (3, t.ElimSigma),
    "paths_rect": (3, t.ElimPaths),
}

_Scope = typing.Tuple[typing.Optional[str], ...]


def _location(expr: s.SExpr) -> typing.Optional[SourceLocation]:
    return getattr(expr, "location", None)


class Resolver:
    """Resolves expressions against the globals of an environment."""

    def __init__(
        self,
        env: GlobalEnv,
        visible: typing.Optional[typing.Callable[[str], bool]] = None,
    ) -> None:
        self.env = env
        self.visible = visible

    def global_term(self, name: str, location: typing.Optional[SourceLocation]) -> t.Term:
        if name not in self.env or (self.visible is not None and not self.visible(name)):
            raise UnknownIdentifier(name, location)
        entry = self.env.lookup(name)
        return t.Axiom(name) if entry.is_postulate else t.Const(name)

    def expr(self, expr: s.SExpr, scope: _Scope = ()) -> t.Term:
        match expr:
            case s.SIdent() | s.SApp():
                return self.application(expr, scope)
            case s.SNumeral(value):
                return to_numeral(value)
            case s.SUniverse(None):
                return t.Universe(self.env.levels.fresh_level())
            case s.SUniverse(level):
                return t.Universe(t.ConcreteLevel(level))
            case s.SHole():
                return t.Hole()
            case s.SArrow(domain, codomain):
                return t.Pi(self.expr(domain, scope), self.expr(codomain, scope + (None,)))
            case s.SForall(binders, body):
                return self.telescope(binders, body, scope, t.Pi)
            case s.SFun(binders, body):
                return self.telescope(binders, body, scope, t.Lam)
            case s.SLet(name, ty, value, body):
                domain = t.Hole() if ty is None else self.expr(ty, scope)
                return t.App(
                    t.Lam(domain, self.expr(body, scope + (name,)), name),
                    self.expr(value, scope),
                )
        raise TypeError(f"cannot resolve {type(expr).__name__}")

    def binders(
        self, binders: typing.Sequence[s.Binder], scope: _Scope
    ) -> typing.Tuple[typing.List[typing.Tuple[str, t.Term]], _Scope]:
        """Resolve each binder's type in the scope of the binders before it."""
        resolved = []
        for binder in binders:
            domain = t.Hole() if binder.type is None else self.expr(binder.type, scope)
            resolved.append((binder.name, domain))
            scope = scope + (binder.name,)
        return resolved, scope

    def telescope(
        self,
        binders: typing.Sequence[s.Binder],
        body: s.SExpr,
        scope: _Scope,
        former: typing.Callable[..., t.Term],
    ) -> t.Term:
        resolved, inner = self.binders(binders, scope)
        return wrap(former, resolved, self.expr(body, inner))

    def application(self, expr: s.SExpr, scope: _Scope) -> t.Term:
        head, args = expr, []
        while isinstance(head, s.SApp):
            args.append(head.arg)
            head = head.fn
        args.reverse()
        if not isinstance(head, s.SIdent):
            return t.apply(self.expr(head, scope), *(self.expr(a, scope) for a in args))
        name, location = head.name, head.location
        if name in scope:
            index = len(scope) - 1 - max(i for i, n in enumerate(scope) if n == name)
            return t.apply(t.Var(index), *(self.expr(a, scope) for a in args))
        if name in NULLARY:
            return t.apply(NULLARY[name](), *(self.expr(a, scope) for a in args))
        if name in ("total2", "tpair"):
            return self.sigma_former(name, args, scope, location)
        if name in FORMERS:
            arity, build = FORMERS[name]
            if len(args) < arity:
                if name == "S" and not args:
                    return t.Lam(t.Nat(), t.Succ(t.Var(0)), "n")
                raise ArityError(
                    f"{name} expects {arity} arguments but got {len(args)}; "
                    f"the {ordinal_number(len(args) + 1)} one is missing",
                    location,
                )
            resolved = [self.expr(a, scope) for a in args]
            return t.apply(build(*resolved[:arity]), *resolved[arity:])
        return t.apply(
            self.global_term(name, location), *(self.expr(a, scope) for a in args)
        )

    def sigma_former(
        self,
        name: str,
        args: typing.Sequence[s.SExpr],
        scope: _Scope,
        location: typing.Optional[SourceLocation],
    ) -> t.Term:
        arity = 1 if name == "total2" else 3
        if len(args) < arity:
            raise ArityError(
                f"{name} expects {arity} arguments but got {len(args)}", location
            )
        family, rest = args[0], args[arity:]
        if isinstance(family, s.SHole) and name == "tpair":
            sigma: t.Term = t.Hole()
        elif isinstance(family, s.SFun) and family.binders[0].type is not None:
            first, *others = family.binders
            domain = self.expr(first.type, scope)
            body = (
                dataclasses.replace(family, binders=tuple(others)) if others else family.body
            )
            sigma = t.Sigma(domain, self.expr(body, scope + (first.name,)), first.name)
        else:
            raise ResolveError(
                f"{name} expects a family `fun x : A => B`"
                + (" or `_`" if name == "tpair" else ""),
                _location(family) or location,
            )
        if name == "total2":
            return t.apply(sigma, *(self.expr(a, scope) for a in rest))
        pair = t.Pair(sigma, self.expr(args[1], scope), self.expr(args[2], scope))
        return t.apply(pair, *(self.expr(a, scope) for a in rest))


def wrap(
    former: typing.Callable[..., t.Term],
    binders: typing.Sequence[typing.Tuple[str, t.Term]],
    body: t.Term,
) -> t.Term:
    """Fold resolved binders around `body` with `Pi` or `Lam`."""
    for name, domain in reversed(binders):
        body = former(domain, body, name)
    return body


def resolve(
    command: s.Command,
    env: GlobalEnv,
    visible: typing.Optional[typing.Callable[[str], bool]] = None,
) -> s.Command:
    """Resolve every expression in `command`; parameters fold into Pi and Lam."""
    resolver = Resolver(env, visible)
    try:
        match command:
            case s.Definition(binders=binders, type=ty, body=body):
                params, inner = resolver.binders(binders, ())
                if any(isinstance(domain, t.Hole) for _, domain in params):
                    raise ResolveError("definition parameters need a type", command.location)
                resolved_type = None if ty is None else wrap(t.Pi, params, resolver.expr(ty, inner))
                resolved_body = wrap(t.Lam, params, resolver.expr(body, inner))
                return dataclasses.replace(
                    command, binders=(), type=resolved_type, body=resolved_body
                )
            case s.Postulate(binders=binders, type=ty):
                params, inner = resolver.binders(binders, ())
                return dataclasses.replace(
                    command, binders=(), type=wrap(t.Pi, params, resolver.expr(ty, inner))
                )
            case s.Eval(expr=expr) | s.CanonicityTest(expr=expr):
                return dataclasses.replace(command, expr=resolver.expr(expr))
    except ResolveError as exc:
        raise exc.at(command.location)
    return command


def resolve_term(
    expr: s.SExpr,
    env: GlobalEnv,
    names: typing.Sequence[str] = (),
    visible: typing.Optional[typing.Callable[[str], bool]] = None,
) -> t.Term:
    """Resolve a single expression; `names` are local binders, outermost first."""
    return Resolver(env, visible).expr(expr, tuple(names))
