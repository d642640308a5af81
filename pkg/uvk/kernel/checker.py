"""
The type checker.

Checking is bidirectional and works on semantic values: types are kept
as values, compared by conversion on values, and read back to terms only
for error messages and for filling holes. Conversion emits universe
constraints into the environment's level graph as it goes; cumulativity
(`<=`) is used at the top of a type, under Pi codomains and in Sigma and
coproduct components, equality everywhere else.
"""
from __future__ import annotations

import contextlib
import dataclasses
import enum
import logging
import typing

from uvk.errors import (
    DuplicateName,
    FuelExhausted,
    TypingError,
    TypingErrorKind,
    UniverseError,
)
from uvk.evaluator import values as v
from uvk.evaluator.nbe import DEFAULT_FUEL, Evaluator, Strategy, quote
from uvk.kernel.env import GlobalEntry, GlobalEnv
from uvk.syntax import terms as t
from uvk.syntax.pretty import pretty

log = logging.getLogger(__name__)


class Mode(enum.Enum):
    EQ = "="
    LEQ = "<="


@dataclasses.dataclass(frozen=True)
class Context:
    """A telescope of named local assumptions, outermost first."""

    entries: typing.Tuple[typing.Tuple[str, t.Term], ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def names(self) -> typing.Tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    def extend(self, name: str, ty: t.Term) -> Context:
        return Context(self.entries + ((name, ty),))


@dataclasses.dataclass(frozen=True)
class Scope:
    """A context with its types evaluated, as the checker works with it."""

    names: typing.Tuple[str, ...] = ()
    types: typing.Tuple[v.Value, ...] = ()
    env: typing.Tuple[v.Delayed, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.names)

    def extend(self, name: str, ty: v.Value) -> Scope:
        return Scope(
            self.names + (name,),
            self.types + (ty,),
            self.env + (v.fresh_variable(self.depth),),
        )

    def lookup(self, index: int) -> v.Value:
        return self.types[self.depth - 1 - index]


@dataclasses.dataclass(frozen=True)
class Definition:
    """A resolved definition ready for the kernel."""

    name: str
    type: typing.Optional[t.Term]
    body: t.Term
    opaque: bool = False


@dataclasses.dataclass(frozen=True)
class Postulate:
    name: str
    type: t.Term


class TypeChecker:
    """
    Checks terms against one global environment.

    Types are evaluated lazily, so a type argument that conversion never
    inspects is never computed. Successful conversions are remembered per
    pair of values for the lifetime of the checker.
    """

    def __init__(self, env: GlobalEnv, fuel: int = DEFAULT_FUEL) -> None:
        self.env = env
        self.levels = env.levels
        self.evaluator = Evaluator(env, Strategy.LAZY, fuel)
        self._global_types: typing.Dict[str, v.Value] = {}
        self._converted: typing.Dict[
            typing.Tuple[int, int], typing.Tuple[v.Value, v.Value, Mode]
        ] = {}

    def scope_of(self, ctx: Context) -> Scope:
        scope = Scope()
        for name, ty in ctx.entries:
            ty_term, _ = self.infer_type(scope, ty)
            scope = scope.extend(name, self.eval(scope, ty_term))
        return scope

    def eval(self, scope: Scope, term: t.Term) -> v.Value:
        return self.evaluator.eval(term, scope.env)

    def read_back(self, scope: Scope, value: v.Delayed) -> t.Term:
        return quote(value, scope.depth)

    def describe(self, scope: Scope, value: v.Delayed) -> str:
        return pretty(self.read_back(scope, value), scope.names)

    def _fail(
        self,
        kind: TypingErrorKind,
        message: str,
        scope: Scope,
        expected: typing.Optional[v.Delayed] = None,
        actual: typing.Optional[v.Delayed] = None,
    ) -> typing.NoReturn:
        raise TypingError(
            kind,
            message,
            expected=None if expected is None else self.read_back(scope, expected),
            actual=None if actual is None else self.read_back(scope, actual),
        )

    def _mismatch(
        self, scope: Scope, expected: v.Delayed, actual: v.Delayed, what: str = "term"
    ) -> typing.NoReturn:
        self._fail(
            TypingErrorKind.TYPE_MISMATCH,
            f"{what} has type {self.describe(scope, actual)} "
            f"but {self.describe(scope, expected)} was expected",
            scope,
            expected,
            actual,
        )

    def global_type(self, name: str) -> v.Value:
        cached = self._global_types.get(name)
        if cached is None:
            cached = self.evaluator.eval(self.env.lookup(name).type)
            self._global_types[name] = cached
        return cached

    def infer_type(self, scope: Scope, term: t.Term) -> typing.Tuple[t.Term, t.LevelExpr]:
        """Check that `term` is a type and return it with its universe level."""
        elaborated, ty = self.infer(scope, term)
        ty = v.force(ty)
        if not isinstance(ty, v.VUniverse):
            self._fail(
                TypingErrorKind.NOT_A_TYPE,
                f"{pretty(elaborated, scope.names)} is not a type, "
                f"it has type {self.describe(scope, ty)}",
                scope,
                actual=ty,
            )
        return elaborated, ty.level

    def infer(self, scope: Scope, term: t.Term) -> typing.Tuple[t.Term, v.Value]:
        match term:
            case t.Var(index):
                if index >= scope.depth:
                    self._fail(
                        TypingErrorKind.UNBOUND_INDEX,
                        f"index {index} is unbound in a context of {scope.depth}",
                        scope,
                    )
                return term, scope.lookup(index)
            case t.Universe(level):
                return term, v.VUniverse(self.levels.successor(level))
            case t.Pi(domain, codomain, name) | t.Sigma(domain, codomain, name):
                domain_term, i = self.infer_type(scope, domain)
                inner = scope.extend(name, self.eval(scope, domain_term))
                codomain_term, j = self.infer_type(inner, codomain)
                former = type(term)(domain_term, codomain_term, name)
                return former, v.VUniverse(self.levels.maximum(i, j))
            case t.Lam(t.Hole(), _, name):
                self._fail(
                    TypingErrorKind.CANNOT_INFER_HOLE,
                    f"cannot infer the type of the binder {name!r}, annotate it",
                    scope,
                )
            case t.Lam(domain, body, name):
                domain_term, _ = self.infer_type(scope, domain)
                domain_value = self.eval(scope, domain_term)
                inner = scope.extend(name, domain_value)
                body_term, body_type = self.infer(inner, body)
                result = v.VPi(
                    name,
                    domain_value,
                    v.Closure(self.evaluator, scope.env, self.read_back(inner, body_type)),
                )
                return t.Lam(domain_term, body_term, name), result
            case t.App(t.Lam(t.Hole(), body, name), arg):
                # `let` without a type annotation: the argument fixes the domain.
                arg_term, arg_type = self.infer(scope, arg)
                lam_term, lam_type = self.infer(
                    scope, t.Lam(self.read_back(scope, arg_type), body, name)
                )
                return t.App(lam_term, arg_term), lam_type.closure.apply(
                    self.eval(scope, arg_term)
                )
            case t.App(fn, arg):
                fn_term, fn_type = self.infer(scope, fn)
                fn_type = v.force(fn_type)
                if not isinstance(fn_type, v.VPi):
                    self._fail(
                        TypingErrorKind.NOT_A_FUNCTION,
                        f"{pretty(fn_term, scope.names)} has type "
                        f"{self.describe(scope, fn_type)} and cannot be applied",
                        scope,
                        actual=fn_type,
                    )
                arg_term = self.check(scope, arg, fn_type.domain)
                return t.App(fn_term, arg_term), fn_type.closure.apply(
                    self.eval(scope, arg_term)
                )
            case t.Pair(t.Hole(), _, _):
                self._fail(
                    TypingErrorKind.CANNOT_INFER_HOLE,
                    "cannot infer the family of a tpair written with `_`",
                    scope,
                )
            case t.Pair(sigma, fst, snd):
                sigma_term, _ = self.infer_type(scope, sigma)
                sigma_value = v.force(self.eval(scope, sigma_term))
                if not isinstance(sigma_value, v.VSigma):
                    self._fail(
                        TypingErrorKind.TYPE_MISMATCH,
                        f"the family of a tpair must be a total2, got "
                        f"{self.describe(scope, sigma_value)}",
                        scope,
                        actual=sigma_value,
                    )
                return self._check_pair(scope, sigma_term, sigma_value, fst, snd), sigma_value
            case t.Const(name) | t.Axiom(name):
                return term, self.global_type(name)
            case t.Hole():
                self._fail(
                    TypingErrorKind.CANNOT_INFER_HOLE,
                    "cannot infer a value for `_` here",
                    scope,
                )
            case t.Unit() | t.Empty() | t.Bool() | t.Nat():
                return term, v.VUniverse(t.ConcreteLevel(0))
            case t.Tt():
                return term, v.UNIT
            case t.TrueC() | t.FalseC():
                return term, v.BOOL
            case t.Zero():
                return term, v.NAT
            case t.Succ(pred):
                return t.Succ(self.check(scope, pred, v.NAT)), v.NAT
            case t.Coprod(left, right):
                left_term, i = self.infer_type(scope, left)
                right_term, j = self.infer_type(scope, right)
                return t.Coprod(left_term, right_term), v.VUniverse(
                    self.levels.maximum(i, j)
                )
            case t.InL(left, right, value) | t.InR(left, right, value):
                left_term, _ = self.infer_type(scope, left)
                right_term, _ = self.infer_type(scope, right)
                left_value = self.eval(scope, left_term)
                right_value = self.eval(scope, right_term)
                side = left_value if isinstance(term, t.InL) else right_value
                value_term = self.check(scope, value, side)
                return (
                    type(term)(left_term, right_term, value_term),
                    v.VCoprod(left_value, right_value),
                )
            case t.Paths(ty, lhs, rhs):
                ty_term, i = self.infer_type(scope, ty)
                ty_value = self.eval(scope, ty_term)
                lhs_term = self.check(scope, lhs, ty_value)
                rhs_term = self.check(scope, rhs, ty_value)
                return t.Paths(ty_term, lhs_term, rhs_term), v.VUniverse(i)
            case t.Refl(ty, point):
                ty_term, _ = self.infer_type(scope, ty)
                ty_value = self.eval(scope, ty_term)
                point_term = self.check(scope, point, ty_value)
                point_value = self.eval(scope, point_term)
                return t.Refl(ty_term, point_term), v.VPaths(
                    ty_value, point_value, point_value
                )
            case t.ElimUnit() | t.ElimEmpty() | t.ElimBool() | t.ElimNat():
                return self._infer_simple_elim(scope, term)
            case t.ElimCoprod() | t.ElimSigma():
                return self._infer_pair_elim(scope, term)
            case t.ElimPaths(motive, refl_case, path):
                return self._infer_path_elim(scope, motive, refl_case, path)
        raise TypeError(f"cannot infer {type(term).__name__}")

    def check(self, scope: Scope, term: t.Term, expected: v.Delayed) -> t.Term:
        expected = v.force(expected)
        match term:
            case t.Lam(domain, body, name) if isinstance(expected, v.VPi):
                if isinstance(domain, t.Hole):
                    domain_term = self.read_back(scope, expected.domain)
                    domain_value = v.force(expected.domain)
                else:
                    domain_term, _ = self.infer_type(scope, domain)
                    domain_value = self.eval(scope, domain_term)
                    if not self.conv(scope.depth, domain_value, expected.domain, Mode.EQ):
                        self._fail(
                            TypingErrorKind.TYPE_MISMATCH,
                            f"binder {name!r} is annotated with "
                            f"{self.describe(scope, domain_value)} but "
                            f"{self.describe(scope, expected.domain)} was expected",
                            scope,
                            expected.domain,
                            domain_value,
                        )
                inner = scope.extend(name, domain_value)
                codomain = expected.closure.apply(inner.env[-1])
                return t.Lam(domain_term, self.check(inner, body, codomain), name)
            case t.Lam(t.Hole(), _, name):
                self._fail(
                    TypingErrorKind.TYPE_MISMATCH,
                    f"a function binding {name!r} was given where "
                    f"{self.describe(scope, expected)} was expected",
                    scope,
                    expected,
                )
            case t.Pair(t.Hole(), fst, snd):
                if not isinstance(expected, v.VSigma):
                    self._fail(
                        TypingErrorKind.CANNOT_INFER_HOLE,
                        f"a tpair was given where {self.describe(scope, expected)} "
                        f"was expected",
                        scope,
                        expected,
                    )
                sigma_term = self.read_back(scope, expected)
                return self._check_pair(scope, sigma_term, expected, fst, snd)
        elaborated, actual = self.infer(scope, term)
        if not self.conv(scope.depth, actual, expected, Mode.LEQ):
            self._mismatch(scope, expected, actual, pretty(elaborated, scope.names))
        return elaborated

    def _check_pair(
        self, scope: Scope, sigma_term: t.Term, sigma: v.VSigma, fst: t.Term, snd: t.Term
    ) -> t.Term:
        fst_term = self.check(scope, fst, sigma.domain)
        snd_term = self.check(
            scope, snd, sigma.closure.apply(self.eval(scope, fst_term))
        )
        return t.Pair(sigma_term, fst_term, snd_term)

    def _infer_motive(
        self, scope: Scope, motive: t.Term
    ) -> typing.Tuple[t.Term, v.Value, v.Value]:
        """Infer `motive : forall x : D, UU` and return it with its value and D."""
        motive_term, motive_type = self.infer(scope, motive)
        motive_type = v.force(motive_type)
        if isinstance(motive_type, v.VPi):
            codomain = motive_type.closure.apply(v.fresh_variable(scope.depth))
            if isinstance(v.force(codomain), v.VUniverse):
                return motive_term, self.eval(scope, motive_term), v.force(
                    motive_type.domain
                )
        self._fail(
            TypingErrorKind.BAD_MOTIVE,
            f"the motive {pretty(motive_term, scope.names)} has type "
            f"{self.describe(scope, motive_type)}, expected a type family",
            scope,
            actual=motive_type,
        )

    def _require_domain(
        self, scope: Scope, motive: t.Term, domain: v.Value, expected: v.Value
    ) -> None:
        if not self.conv(scope.depth, domain, expected, Mode.EQ):
            self._fail(
                TypingErrorKind.BAD_MOTIVE,
                f"the motive {pretty(motive, scope.names)} is a family over "
                f"{self.describe(scope, domain)}, expected one over "
                f"{self.describe(scope, expected)}",
                scope,
                expected,
                domain,
            )

    def _infer_simple_elim(
        self, scope: Scope, term: t.Term
    ) -> typing.Tuple[t.Term, v.Value]:
        motive_term, motive, domain = self._infer_motive(scope, term.motive)
        family = lambda value: self.evaluator.apply(motive, value)
        match term:
            case t.ElimUnit(_, tt_case, scrutinee):
                self._require_domain(scope, motive_term, domain, v.UNIT)
                tt_term = self.check(scope, tt_case, family(v.TT))
                scrutinee_term = self.check(scope, scrutinee, v.UNIT)
                elaborated = t.ElimUnit(motive_term, tt_term, scrutinee_term)
            case t.ElimEmpty(_, scrutinee):
                self._require_domain(scope, motive_term, domain, v.EMPTY)
                scrutinee_term = self.check(scope, scrutinee, v.EMPTY)
                elaborated = t.ElimEmpty(motive_term, scrutinee_term)
            case t.ElimBool(_, true_case, false_case, scrutinee):
                self._require_domain(scope, motive_term, domain, v.BOOL)
                true_term = self.check(scope, true_case, family(v.TRUE))
                false_term = self.check(scope, false_case, family(v.FALSE))
                scrutinee_term = self.check(scope, scrutinee, v.BOOL)
                elaborated = t.ElimBool(motive_term, true_term, false_term, scrutinee_term)
            case t.ElimNat(_, zero_case, succ_case, scrutinee):
                self._require_domain(scope, motive_term, domain, v.NAT)
                zero_term = self.check(scope, zero_case, family(v.ZERO))
                step = v.VPi(
                    "n",
                    v.NAT,
                    v.NativeClosure(
                        lambda n: v.VPi(
                            "IHn",
                            family(n),
                            v.NativeClosure(lambda _: family(v.VSucc(n))),
                        )
                    ),
                )
                succ_term = self.check(scope, succ_case, step)
                scrutinee_term = self.check(scope, scrutinee, v.NAT)
                elaborated = t.ElimNat(motive_term, zero_term, succ_term, scrutinee_term)
        return elaborated, family(self.eval(scope, scrutinee_term))

    def _infer_pair_elim(
        self, scope: Scope, term: t.Term
    ) -> typing.Tuple[t.Term, v.Value]:
        motive_term, motive, domain = self._infer_motive(scope, term.motive)
        family = lambda value: self.evaluator.apply(motive, value)
        match term, domain:
            case t.ElimCoprod(_, inl_case, inr_case, scrutinee), v.VCoprod(left, right):
                inl_type = v.VPi(
                    "a", left, v.NativeClosure(lambda a: family(v.VInL(left, right, a)))
                )
                inr_type = v.VPi(
                    "b", right, v.NativeClosure(lambda b: family(v.VInR(left, right, b)))
                )
                inl_term = self.check(scope, inl_case, inl_type)
                inr_term = self.check(scope, inr_case, inr_type)
                scrutinee_term = self.check(scope, scrutinee, domain)
                elaborated = t.ElimCoprod(motive_term, inl_term, inr_term, scrutinee_term)
            case t.ElimSigma(_, pair_case, scrutinee), v.VSigma(name, fst_type, snd_family):
                pair_type = v.VPi(
                    name,
                    fst_type,
                    v.NativeClosure(
                        lambda a: v.VPi(
                            "b",
                            snd_family.apply(a),
                            v.NativeClosure(lambda b: family(v.VPair(domain, a, b))),
                        )
                    ),
                )
                pair_term = self.check(scope, pair_case, pair_type)
                scrutinee_term = self.check(scope, scrutinee, domain)
                elaborated = t.ElimSigma(motive_term, pair_term, scrutinee_term)
            case _:
                expected = "coprod" if isinstance(term, t.ElimCoprod) else "total2"
                self._fail(
                    TypingErrorKind.BAD_MOTIVE,
                    f"the motive {pretty(motive_term, scope.names)} must be a family "
                    f"over a {expected} type, not over {self.describe(scope, domain)}",
                    scope,
                    actual=domain,
                )
        return elaborated, family(self.eval(scope, scrutinee_term))

    def _infer_path_elim(
        self, scope: Scope, motive: t.Term, refl_case: t.Term, path: t.Term
    ) -> typing.Tuple[t.Term, v.Value]:
        path_term, path_type = self.infer(scope, path)
        path_type = v.force(path_type)
        if not isinstance(path_type, v.VPaths):
            self._fail(
                TypingErrorKind.TYPE_MISMATCH,
                f"{pretty(path_term, scope.names)} has type "
                f"{self.describe(scope, path_type)}, expected a path",
                scope,
                actual=path_type,
            )
        ty, start, end = path_type.ty, path_type.lhs, path_type.rhs
        motive_term, motive_type = self.infer(scope, motive)
        motive_type = v.force(motive_type)
        bad = lambda: self._fail(
            TypingErrorKind.BAD_MOTIVE,
            f"the motive {pretty(motive_term, scope.names)} of paths_rect has type "
            f"{self.describe(scope, motive_type)}, expected "
            f"forall (y : {self.describe(scope, ty)}) "
            f"(_ : paths _ {self.describe(scope, start)} y), UU",
            scope,
            actual=motive_type,
        )
        if not isinstance(motive_type, v.VPi):
            bad()
        if not self.conv(scope.depth, motive_type.domain, ty, Mode.EQ):
            bad()
        endpoint = v.fresh_variable(scope.depth)
        inner = v.force(motive_type.closure.apply(endpoint))
        if not isinstance(inner, v.VPi):
            bad()
        if not self.conv(scope.depth + 1, inner.domain, v.VPaths(ty, start, endpoint), Mode.EQ):
            bad()
        if not isinstance(
            v.force(inner.closure.apply(v.fresh_variable(scope.depth + 1))), v.VUniverse
        ):
            bad()
        motive_value = self.eval(scope, motive_term)
        refl_type = self.evaluator.apply_all(motive_value, start, v.VRefl(ty, start))
        refl_term = self.check(scope, refl_case, refl_type)
        result = self.evaluator.apply_all(motive_value, end, self.eval(scope, path_term))
        return t.ElimPaths(motive_term, refl_term, path_term), result

    def conv(self, depth: int, left: v.Delayed, right: v.Delayed, mode: Mode) -> bool:
        """Decide convertibility, recording the universe constraints it needs."""
        left, right = v.force(left), v.force(right)
        if left is right:
            return True
        key = (id(left), id(right))
        known = self._converted.get(key)
        if known is not None and (known[2] is Mode.EQ or known[2] is mode):
            return True
        if not self._conv(depth, left, right, mode):
            return False
        if known is None or mode is Mode.EQ:
            # The values are kept alive so their ids stay unique.
            self._converted[key] = (left, right, mode)
        return True

    def _conv(self, depth: int, left: v.Value, right: v.Value, mode: Mode) -> bool:
        match left, right:
            case v.VUniverse(i), v.VUniverse(j):
                if mode is Mode.LEQ:
                    self.levels.add_le(i, j)
                else:
                    self.levels.add_eq(i, j)
                return True
            case (v.VPi(_, dom1, clo1), v.VPi(_, dom2, clo2)) | (
                v.VSigma(_, dom1, clo1),
                v.VSigma(_, dom2, clo2),
            ):
                domain_mode = mode if isinstance(left, v.VSigma) else Mode.EQ
                if not self.conv(depth, dom1, dom2, domain_mode):
                    return False
                if _same_closure(clo1, clo2):
                    return True
                fresh = v.fresh_variable(depth)
                return self.conv(depth + 1, clo1.apply(fresh), clo2.apply(fresh), mode)
            case v.VLam(_, dom1, clo1), v.VLam(_, dom2, clo2):
                if not self.conv(depth, dom1, dom2, Mode.EQ):
                    return False
                if _same_closure(clo1, clo2):
                    return True
                fresh = v.fresh_variable(depth)
                return self.conv(depth + 1, clo1.apply(fresh), clo2.apply(fresh), Mode.EQ)
            case v.VPair(s1, a1, b1), v.VPair(s2, a2, b2):
                return self._conv_all(depth, ((s1, s2), (a1, a2), (b1, b2)))
            case v.VSucc(p1), v.VSucc(p2):
                return self._conv_numerals(depth, left, right)
            case v.VCoprod(l1, r1), v.VCoprod(l2, r2):
                return self.conv(depth, l1, l2, mode) and self.conv(depth, r1, r2, mode)
            case (v.VInL(l1, r1, x1), v.VInL(l2, r2, x2)) | (
                v.VInR(l1, r1, x1),
                v.VInR(l2, r2, x2),
            ):
                return self._conv_all(depth, ((l1, l2), (r1, r2), (x1, x2)))
            case v.VPaths(a1, x1, y1), v.VPaths(a2, x2, y2):
                return self._conv_all(depth, ((a1, a2), (x1, x2), (y1, y2)))
            case v.VRefl(a1, x1), v.VRefl(a2, x2):
                return self._conv_all(depth, ((a1, a2), (x1, x2)))
            case v.VNeutral(h1, s1), v.VNeutral(h2, s2):
                return h1 == h2 and len(s1) == len(s2) and all(
                    self._conv_frame(depth, f1, f2) for f1, f2 in zip(s1, s2)
                )
        return type(left) is type(right) and not dataclasses.fields(left)

    def _conv_all(self, depth: int, pairs) -> bool:
        return all(self.conv(depth, a, b, Mode.EQ) for a, b in pairs)

    def _conv_numerals(self, depth: int, left: v.Value, right: v.Value) -> bool:
        while isinstance(left, v.VSucc) and isinstance(right, v.VSucc):
            left, right = v.force(left.pred), v.force(right.pred)
        return self.conv(depth, left, right, Mode.EQ)

    def _conv_frame(self, depth: int, left: v.Frame, right: v.Frame) -> bool:
        if type(left) is not type(right):
            return False
        return self._conv_all(
            depth,
            [
                (getattr(left, field.name), getattr(right, field.name))
                for field in dataclasses.fields(left)
            ],
        )


def _same_closure(left: v.AnyClosure, right: v.AnyClosure) -> bool:
    """One body under pointer-equal environments: the two functions are the same."""
    if not (isinstance(left, v.Closure) and isinstance(right, v.Closure)):
        return False
    if left.body is not right.body or left.evaluator is not right.evaluator:
        return False
    if len(left.env) != len(right.env):
        return False
    return all(
        a is b or v.force(a) is v.force(b) for a, b in zip(left.env, right.env)
    )


@contextlib.contextmanager
def _checking(env: GlobalEnv, label: str) -> typing.Iterator[None]:
    """Roll the level graph back on failure and report universe errors as typing errors."""
    try:
        with env.levels.transaction(), env.levels.provenance(label):
            yield
    except UniverseError as exc:
        raise TypingError(
            TypingErrorKind.UNIVERSE_ERROR,
            f"{label}: {exc.message}",
            universe_error=exc,
        ) from exc


def infer(
    env: GlobalEnv, ctx: Context, term: t.Term, fuel: int = DEFAULT_FUEL
) -> typing.Tuple[t.Term, GlobalEnv]:
    """The normalized type of `term`; level constraints land in `env`."""
    checker = TypeChecker(env, fuel)
    with _checking(env, "infer"):
        scope = checker.scope_of(ctx)
        _, ty = checker.infer(scope, term)
    return checker.read_back(scope, ty), env


def elaborate(
    env: GlobalEnv, ctx: Context, term: t.Term, fuel: int = DEFAULT_FUEL
) -> typing.Tuple[t.Term, t.Term]:
    """Infer `term` and return it with holes filled, together with its type."""
    checker = TypeChecker(env, fuel)
    with _checking(env, "elaborate"):
        scope = checker.scope_of(ctx)
        elaborated, ty = checker.infer(scope, term)
    return elaborated, checker.read_back(scope, ty)


def check(
    env: GlobalEnv, ctx: Context, term: t.Term, expected: t.Term, fuel: int = DEFAULT_FUEL
) -> GlobalEnv:
    checker = TypeChecker(env, fuel)
    with _checking(env, "check"):
        scope = checker.scope_of(ctx)
        expected_term, _ = checker.infer_type(scope, expected)
        checker.check(scope, term, checker.eval(scope, expected_term))
    return env


def convertible(
    env: GlobalEnv, ctx: Context, left: t.Term, right: t.Term, fuel: int = DEFAULT_FUEL
) -> bool:
    """Compare normal forms up to binder names and level-variable identity."""
    evaluator = Evaluator(env, Strategy.COMPUTE, fuel)
    depth = len(ctx)
    return t.struct_eq(evaluator.normalize(left, depth), evaluator.normalize(right, depth))


def whnf(env: GlobalEnv, ctx: Context, term: t.Term, fuel: int = DEFAULT_FUEL) -> t.Term:
    """
    Reduce the head of `term` until it is an introduction form or neutral.

    Every delta, beta and iota step counts against `fuel`, including the
    steps spent reducing an eliminator's scrutinee.
    """
    steps = 0

    def tick() -> None:
        nonlocal steps
        steps += 1
        if steps > fuel:
            raise FuelExhausted(fuel)

    def reduce(term: t.Term) -> t.Term:
        while True:
            head, args = t.spine(term)
            if isinstance(head, t.Lam) and args:
                tick()
                term = t.apply(t.instantiate(head.body, args[0]), *args[1:])
                continue
            if isinstance(head, t.Const):
                entry = env.lookup(head.name)
                if entry.body is not None and not entry.opaque:
                    tick()
                    term = t.apply(entry.body, *args)
                    continue
                return term
            if isinstance(head, t.ELIMINATORS):
                scrutinee = reduce(t.scrutinee_of(head))
                reduced = _iota(head, scrutinee)
                if reduced is not None:
                    tick()
                    term = t.apply(reduced, *args)
                    continue
                field = "path" if isinstance(head, t.ElimPaths) else "scrutinee"
                return t.apply(dataclasses.replace(head, **{field: scrutinee}), *args)
            return term

    return reduce(term)


def _iota(elim: t.Term, scrutinee: t.Term) -> typing.Optional[t.Term]:
    match elim, scrutinee:
        case t.ElimUnit(_, tt_case, _), t.Tt():
            return tt_case
        case t.ElimBool(_, true_case, _, _), t.TrueC():
            return true_case
        case t.ElimBool(_, _, false_case, _), t.FalseC():
            return false_case
        case t.ElimNat(_, zero_case, _, _), t.Zero():
            return zero_case
        case t.ElimNat(motive, zero_case, succ_case, _), t.Succ(pred):
            return t.apply(succ_case, pred, t.ElimNat(motive, zero_case, succ_case, pred))
        case t.ElimCoprod(_, inl_case, _, _), t.InL(_, _, value):
            return t.App(inl_case, value)
        case t.ElimCoprod(_, _, inr_case, _), t.InR(_, _, value):
            return t.App(inr_case, value)
        case t.ElimSigma(_, pair_case, _), t.Pair(_, fst, snd):
            return t.apply(pair_case, fst, snd)
        case t.ElimPaths(_, refl_case, _), t.Refl():
            return refl_case
    return None


def register(
    env: GlobalEnv,
    command: typing.Union[Definition, Postulate],
    fuel: int = DEFAULT_FUEL,
    **entry_fields: typing.Any,
) -> GlobalEnv:
    """
    Check a definition or postulate and add it to `env`.

    On failure `env` is left exactly as it was, level graph included, and
    universe inconsistencies surface as a `TypingError` of kind
    `UNIVERSE_ERROR` wrapping the `UniverseError`.
    """
    if command.name in env:
        raise DuplicateName(command.name)
    checker = TypeChecker(env, fuel)
    scope = Scope()
    with _checking(env, command.name):
        if isinstance(command, Postulate):
            ty, _ = checker.infer_type(scope, command.type)
            entry = GlobalEntry(command.name, ty, None, **entry_fields)
        elif command.type is not None:
            ty, _ = checker.infer_type(scope, command.type)
            body = checker.check(scope, command.body, checker.eval(scope, ty))
            entry = GlobalEntry(command.name, ty, body, command.opaque, **entry_fields)
        else:
            body, ty_value = checker.infer(scope, command.body)
            ty = checker.read_back(scope, ty_value)
            entry = GlobalEntry(command.name, ty, body, command.opaque, **entry_fields)
    env.add(entry)
    log.debug(f"Checked {command.name} in {checker.evaluator.steps} steps")
    return env
