"""
Semantic values produced by the evaluator.

Values are in weak head normal form; sub-values may be `Thunk`s under the
lazy strategy and must go through `force` before inspection.
"""
from __future__ import annotations

import dataclasses
import typing

from uvk.syntax.terms import LevelExpr, Term

if typing.TYPE_CHECKING:
    from uvk.evaluator.nbe import Evaluator


class Value:
    __slots__ = ()


class Thunk:
    """A suspended computation that runs at most once."""

    __slots__ = ("_compute", "_value")

    def __init__(self, compute: typing.Callable[[], Value]) -> None:
        self._compute = compute
        self._value: typing.Optional[Value] = None

    def __repr__(self) -> str:
        state = "forced" if self.forced else "pending"
        return f"<Thunk {state}>"

    @property
    def forced(self) -> bool:
        return self._value is not None

    def force(self) -> Value:
        if self._value is None:
            value = self._compute()
            while isinstance(value, Thunk):
                value = value.force()
            self._value = value
            self._compute = None
        return self._value


Delayed = typing.Union[Value, Thunk]


def force(value: Delayed) -> Value:
    while isinstance(value, Thunk):
        value = value.force()
    return value


@dataclasses.dataclass(frozen=True, eq=False)
class Closure:
    """A term body waiting for one more argument, bound to its evaluator."""

    evaluator: Evaluator
    env: typing.Tuple[Delayed, ...]
    body: Term

    def apply(self, argument: Delayed) -> Value:
        return self.evaluator.eval(self.body, self.env + (argument,))


@dataclasses.dataclass(frozen=True, eq=False)
class NativeClosure:
    fn: typing.Callable[[Delayed], Value]

    def apply(self, argument: Delayed) -> Value:
        return force(self.fn(argument))


AnyClosure = typing.Union[Closure, NativeClosure]


def _value(cls):
    return dataclasses.dataclass(frozen=True, eq=False)(cls)


@_value
class VUniverse(Value):
    level: LevelExpr


@_value
class VPi(Value):
    name: str
    domain: Delayed
    closure: AnyClosure


@_value
class VLam(Value):
    name: str
    domain: Delayed
    closure: AnyClosure


@_value
class VSigma(Value):
    name: str
    domain: Delayed
    closure: AnyClosure


@_value
class VPair(Value):
    sigma: Delayed
    fst: Delayed
    snd: Delayed


@_value
class VUnit(Value):
    pass


@_value
class VTt(Value):
    pass


@_value
class VEmpty(Value):
    pass


@_value
class VBool(Value):
    pass


@_value
class VTrue(Value):
    pass


@_value
class VFalse(Value):
    pass


@_value
class VNat(Value):
    pass


@_value
class VZero(Value):
    pass


@_value
class VSucc(Value):
    pred: Delayed


@_value
class VCoprod(Value):
    left: Delayed
    right: Delayed


@_value
class VInL(Value):
    left: Delayed
    right: Delayed
    value: Delayed


@_value
class VInR(Value):
    left: Delayed
    right: Delayed
    value: Delayed


@_value
class VPaths(Value):
    ty: Delayed
    lhs: Delayed
    rhs: Delayed


@_value
class VRefl(Value):
    ty: Delayed
    point: Delayed


UNIT, TT, EMPTY, BOOL, TRUE, FALSE, NAT, ZERO = (
    VUnit(),
    VTt(),
    VEmpty(),
    VBool(),
    VTrue(),
    VFalse(),
    VNat(),
    VZero(),
)


@dataclasses.dataclass(frozen=True)
class NVar:
    """A free variable, identified by its de Bruijn level."""

    level: int


@dataclasses.dataclass(frozen=True)
class NAxiom:
    name: str


@dataclasses.dataclass(frozen=True)
class NOpaque:
    name: str


Head = typing.Union[NVar, NAxiom, NOpaque]


class Frame:
    """One pending elimination on a neutral value."""

    __slots__ = ()


@_value
class FApp(Frame):
    arg: Delayed


@_value
class FElimUnit(Frame):
    motive: Delayed
    tt_case: Delayed


@_value
class FElimEmpty(Frame):
    motive: Delayed


@_value
class FElimBool(Frame):
    motive: Delayed
    true_case: Delayed
    false_case: Delayed


@_value
class FElimNat(Frame):
    motive: Delayed
    zero_case: Delayed
    succ_case: Delayed


@_value
class FElimCoprod(Frame):
    motive: Delayed
    inl_case: Delayed
    inr_case: Delayed


@_value
class FElimSigma(Frame):
    motive: Delayed
    pair_case: Delayed


@_value
class FElimPaths(Frame):
    motive: Delayed
    refl_case: Delayed


@_value
class VNeutral(Value):
    """A head that cannot reduce, followed by the eliminations stuck on it."""

    head: Head
    spine: typing.Tuple[Frame, ...] = ()

    def push(self, frame: Frame) -> VNeutral:
        return VNeutral(self.head, self.spine + (frame,))


def fresh_variable(level: int) -> VNeutral:
    return VNeutral(NVar(level))
