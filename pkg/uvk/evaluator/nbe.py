"""
Normalization by evaluation.

`compute` evaluates arguments, constructor fields and eliminator methods
eagerly. `lazy` suspends them in thunks and forces a thunk only when a
redex or the quoter needs its value; a forced thunk is never re-run.
"""
from __future__ import annotations

import enum
import logging
import typing

from uvk.errors import FuelExhausted
from uvk.evaluator import values as v
from uvk.syntax import terms as t

if typing.TYPE_CHECKING:
    from uvk.kernel.env import GlobalEnv

log = logging.getLogger(__name__)

DEFAULT_FUEL = 10**7


class Strategy(str, enum.Enum):
    COMPUTE = "compute"
    LAZY = "lazy"


_ATOMS = {
    t.Unit: v.UNIT,
    t.Tt: v.TT,
    t.Empty: v.EMPTY,
    t.Bool: v.BOOL,
    t.TrueC: v.TRUE,
    t.FalseC: v.FALSE,
    t.Nat: v.NAT,
    t.Zero: v.ZERO,
}


class Evaluator:
    """One evaluation run: a strategy, a step budget and a cache of global values."""

    def __init__(
        self,
        env: GlobalEnv,
        strategy: Strategy = Strategy.COMPUTE,
        fuel: int = DEFAULT_FUEL,
        transparent_all: bool = False,
    ) -> None:
        self.env = env
        self.strategy = Strategy(strategy)
        self.fuel = fuel
        self.transparent_all = transparent_all
        self.steps = 0
        self._globals: typing.Dict[str, v.Value] = {}

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(strategy={self.strategy.value}, "
            f"steps={self.steps}, fuel={self.fuel})"
        )

    @property
    def lazy(self) -> bool:
        return self.strategy is Strategy.LAZY

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.fuel:
            raise FuelExhausted(self.fuel)

    def delay(self, term: t.Term, env: typing.Tuple[v.Delayed, ...]) -> v.Delayed:
        """Evaluate `term` now under `compute`, or suspend it under `lazy`."""
        if not self.lazy:
            return self.eval(term, env)
        if isinstance(term, t.Var):
            return env[len(env) - 1 - term.index]
        atom = _ATOMS.get(type(term))
        if atom is not None:
            return atom
        return v.Thunk(lambda: self.eval(term, env))

    def suspend(self, compute: typing.Callable[[], v.Value]) -> v.Delayed:
        return v.Thunk(compute) if self.lazy else compute()

    def eval(self, term: t.Term, env: typing.Tuple[v.Delayed, ...] = ()) -> v.Value:
        atom = _ATOMS.get(type(term))
        if atom is not None:
            return atom
        match term:
            case t.Var(index):
                if index >= len(env):
                    raise IndexError(f"unbound index {index} at depth {len(env)}")
                return v.force(env[len(env) - 1 - index])
            case t.Universe(level):
                return v.VUniverse(level)
            case t.Pi(domain, codomain, name):
                return v.VPi(name, self.delay(domain, env), v.Closure(self, env, codomain))
            case t.Lam(domain, body, name):
                return v.VLam(name, self.delay(domain, env), v.Closure(self, env, body))
            case t.Sigma(domain, codomain, name):
                return v.VSigma(
                    name, self.delay(domain, env), v.Closure(self, env, codomain)
                )
            case t.App(fn, arg):
                return self.apply(self.eval(fn, env), self.delay(arg, env))
            case t.Pair(sigma, fst, snd):
                return v.VPair(
                    self.delay(sigma, env), self.delay(fst, env), self.delay(snd, env)
                )
            case t.Const(name):
                return self.constant(name)
            case t.Axiom(name):
                return v.VNeutral(v.NAxiom(name))
            case t.Succ(pred):
                return v.VSucc(self.delay(pred, env))
            case t.Coprod(left, right):
                return v.VCoprod(self.delay(left, env), self.delay(right, env))
            case t.InL(left, right, value):
                return v.VInL(
                    self.delay(left, env), self.delay(right, env), self.delay(value, env)
                )
            case t.InR(left, right, value):
                return v.VInR(
                    self.delay(left, env), self.delay(right, env), self.delay(value, env)
                )
            case t.Paths(ty, lhs, rhs):
                return v.VPaths(
                    self.delay(ty, env), self.delay(lhs, env), self.delay(rhs, env)
                )
            case t.Refl(ty, point):
                return v.VRefl(self.delay(ty, env), self.delay(point, env))
            case t.ElimUnit(motive, tt_case, scrutinee):
                return self.elim_unit(
                    self.delay(motive, env),
                    self.delay(tt_case, env),
                    self.eval(scrutinee, env),
                )
            case t.ElimEmpty(motive, scrutinee):
                return self.elim_empty(self.delay(motive, env), self.eval(scrutinee, env))
            case t.ElimBool(motive, true_case, false_case, scrutinee):
                return self.elim_bool(
                    self.delay(motive, env),
                    self.delay(true_case, env),
                    self.delay(false_case, env),
                    self.eval(scrutinee, env),
                )
            case t.ElimNat(motive, zero_case, succ_case, scrutinee):
                return self.elim_nat(
                    self.delay(motive, env),
                    self.delay(zero_case, env),
                    self.delay(succ_case, env),
                    self.eval(scrutinee, env),
                )
            case t.ElimCoprod(motive, inl_case, inr_case, scrutinee):
                return self.elim_coprod(
                    self.delay(motive, env),
                    self.delay(inl_case, env),
                    self.delay(inr_case, env),
                    self.eval(scrutinee, env),
                )
            case t.ElimSigma(motive, pair_case, scrutinee):
                return self.elim_sigma(
                    self.delay(motive, env),
                    self.delay(pair_case, env),
                    self.eval(scrutinee, env),
                )
            case t.ElimPaths(motive, refl_case, path):
                return self.elim_paths(
                    self.delay(motive, env),
                    self.delay(refl_case, env),
                    self.eval(path, env),
                )
            case t.Hole():
                raise ValueError("cannot evaluate a term that still contains holes")
        raise TypeError(f"cannot evaluate {type(term).__name__}")

    def constant(self, name: str) -> v.Value:
        cached = self._globals.get(name)
        if cached is not None:
            return cached
        entry = self.env.lookup(name)
        if entry.body is None:
            value: v.Value = v.VNeutral(v.NAxiom(name))
        elif entry.opaque and not self.transparent_all:
            value = v.VNeutral(v.NOpaque(name))
        else:
            self.tick()
            value = self.eval(entry.body, ())
        self._globals[name] = value
        return value

    def apply(self, fn: v.Delayed, arg: v.Delayed) -> v.Value:
        fn = v.force(fn)
        if isinstance(fn, v.VLam):
            self.tick()
            return fn.closure.apply(arg)
        if isinstance(fn, v.VNeutral):
            return fn.push(v.FApp(arg))
        raise TypeError(f"cannot apply {type(fn).__name__}")

    def apply_all(self, fn: v.Delayed, *args: v.Delayed) -> v.Value:
        result = v.force(fn)
        for arg in args:
            result = self.apply(result, arg)
        return result

    def elim_unit(self, motive, tt_case, scrutinee: v.Value) -> v.Value:
        if isinstance(scrutinee, v.VTt):
            self.tick()
            return v.force(tt_case)
        return self._stuck(scrutinee, v.FElimUnit(motive, tt_case))

    def elim_empty(self, motive, scrutinee: v.Value) -> v.Value:
        return self._stuck(scrutinee, v.FElimEmpty(motive))

    def elim_bool(self, motive, true_case, false_case, scrutinee: v.Value) -> v.Value:
        if isinstance(scrutinee, v.VTrue):
            self.tick()
            return v.force(true_case)
        if isinstance(scrutinee, v.VFalse):
            self.tick()
            return v.force(false_case)
        return self._stuck(scrutinee, v.FElimBool(motive, true_case, false_case))

    def elim_nat(self, motive, zero_case, succ_case, scrutinee: v.Value) -> v.Value:
        if isinstance(scrutinee, v.VZero):
            self.tick()
            return v.force(zero_case)
        if isinstance(scrutinee, v.VSucc):
            self.tick()
            pred = scrutinee.pred
            recursive = self.suspend(
                lambda: self.elim_nat(motive, zero_case, succ_case, v.force(pred))
            )
            return self.apply(self.apply(succ_case, pred), recursive)
        return self._stuck(scrutinee, v.FElimNat(motive, zero_case, succ_case))

    def elim_coprod(self, motive, inl_case, inr_case, scrutinee: v.Value) -> v.Value:
        if isinstance(scrutinee, v.VInL):
            self.tick()
            return self.apply(inl_case, scrutinee.value)
        if isinstance(scrutinee, v.VInR):
            self.tick()
            return self.apply(inr_case, scrutinee.value)
        return self._stuck(scrutinee, v.FElimCoprod(motive, inl_case, inr_case))

    def elim_sigma(self, motive, pair_case, scrutinee: v.Value) -> v.Value:
        if isinstance(scrutinee, v.VPair):
            self.tick()
            return self.apply(self.apply(pair_case, scrutinee.fst), scrutinee.snd)
        return self._stuck(scrutinee, v.FElimSigma(motive, pair_case))

    def elim_paths(self, motive, refl_case, path: v.Value) -> v.Value:
        if isinstance(path, v.VRefl):
            self.tick()
            return v.force(refl_case)
        return self._stuck(path, v.FElimPaths(motive, refl_case))

    @staticmethod
    def _stuck(scrutinee: v.Value, frame: v.Frame) -> v.Value:
        if isinstance(scrutinee, v.VNeutral):
            return scrutinee.push(frame)
        raise TypeError(
            f"{type(frame).__name__} applied to {type(scrutinee).__name__}"
        )

    def normalize(self, term: t.Term, depth: int = 0) -> t.Term:
        env = tuple(v.fresh_variable(level) for level in range(depth))
        return quote(self.eval(term, env), depth)


def quote(value: v.Delayed, depth: int) -> t.Term:
    """Read a value back into a beta-normal term with `depth` free variables."""
    value = v.force(value)
    match value:
        case v.VZero() | v.VSucc():
            count = 0
            while isinstance(value, v.VSucc):
                count += 1
                value = v.force(value.pred)
            result = t.Zero() if isinstance(value, v.VZero) else quote(value, depth)
            for _ in range(count):
                result = t.Succ(result)
            return result
        case v.VUniverse(level):
            return t.Universe(level)
        case v.VPi(name, domain, closure):
            return t.Pi(quote(domain, depth), _quote_body(closure, depth), name)
        case v.VLam(name, domain, closure):
            return t.Lam(quote(domain, depth), _quote_body(closure, depth), name)
        case v.VSigma(name, domain, closure):
            return t.Sigma(quote(domain, depth), _quote_body(closure, depth), name)
        case v.VPair(sigma, fst, snd):
            return t.Pair(quote(sigma, depth), quote(fst, depth), quote(snd, depth))
        case v.VCoprod(left, right):
            return t.Coprod(quote(left, depth), quote(right, depth))
        case v.VInL(left, right, inner):
            return t.InL(quote(left, depth), quote(right, depth), quote(inner, depth))
        case v.VInR(left, right, inner):
            return t.InR(quote(left, depth), quote(right, depth), quote(inner, depth))
        case v.VPaths(ty, lhs, rhs):
            return t.Paths(quote(ty, depth), quote(lhs, depth), quote(rhs, depth))
        case v.VRefl(ty, point):
            return t.Refl(quote(ty, depth), quote(point, depth))
        case v.VNeutral(head, spine):
            return _quote_neutral(head, spine, depth)
    for term_type, atom in _ATOMS.items():
        if value is atom or type(value) is type(atom):
            return term_type()
    raise TypeError(f"cannot quote {type(value).__name__}")


def _quote_body(closure: v.AnyClosure, depth: int) -> t.Term:
    return quote(closure.apply(v.fresh_variable(depth)), depth + 1)


def _quote_neutral(head: v.Head, spine: typing.Sequence[v.Frame], depth: int) -> t.Term:
    match head:
        case v.NVar(level):
            result: t.Term = t.Var(depth - 1 - level)
        case v.NAxiom(name):
            result = t.Axiom(name)
        case v.NOpaque(name):
            result = t.Const(name)
    for frame in spine:
        match frame:
            case v.FApp(arg):
                result = t.App(result, quote(arg, depth))
            case v.FElimUnit(motive, tt_case):
                result = t.ElimUnit(quote(motive, depth), quote(tt_case, depth), result)
            case v.FElimEmpty(motive):
                result = t.ElimEmpty(quote(motive, depth), result)
            case v.FElimBool(motive, true_case, false_case):
                result = t.ElimBool(
                    quote(motive, depth),
                    quote(true_case, depth),
                    quote(false_case, depth),
                    result,
                )
            case v.FElimNat(motive, zero_case, succ_case):
                result = t.ElimNat(
                    quote(motive, depth),
                    quote(zero_case, depth),
                    quote(succ_case, depth),
                    result,
                )
            case v.FElimCoprod(motive, inl_case, inr_case):
                result = t.ElimCoprod(
                    quote(motive, depth),
                    quote(inl_case, depth),
                    quote(inr_case, depth),
                    result,
                )
            case v.FElimSigma(motive, pair_case):
                result = t.ElimSigma(
                    quote(motive, depth), quote(pair_case, depth), result
                )
            case v.FElimPaths(motive, refl_case):
                result = t.ElimPaths(
                    quote(motive, depth), quote(refl_case, depth), result
                )
    return result


def evaluate(
    env: GlobalEnv,
    term: t.Term,
    strategy: Strategy = Strategy.COMPUTE,
    fuel: int = DEFAULT_FUEL,
    transparent_all: bool = False,
) -> v.Value:
    return Evaluator(env, strategy, fuel, transparent_all).eval(term)


def normalize(
    env: GlobalEnv,
    term: t.Term,
    strategy: Strategy = Strategy.COMPUTE,
    fuel: int = DEFAULT_FUEL,
    transparent_all: bool = False,
) -> t.Term:
    """The beta-iota-delta normal form of a closed term."""
    return quote(evaluate(env, term, strategy, fuel, transparent_all), 0)
