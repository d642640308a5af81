"""
Canonicity experiments on generated terms.

The generator builds closed terms of type `nat` that are well typed by
construction, from numerals, lambdas, applications and every eliminator.
The harness normalizes each one under both strategies, classifies the
result and compares the two normal forms.
"""
from __future__ import annotations

import dataclasses
import enum
import logging
import random
import time
import typing

from uvk.errors import UvkError
from uvk.evaluator.classify import Classification, Numeral, Stuck, classify
from uvk.evaluator.nbe import DEFAULT_FUEL, Evaluator, Strategy, quote
from uvk.kernel import checker
from uvk.kernel.env import GlobalEnv
from uvk.syntax import terms as t
from uvk.universes import UniverseMode
from uvk.utils.numerals import to_numeral

log = logging.getLogger(__name__)

BLOCKING_AXIOM = "canonicity_blocker"


class Sort(enum.Enum):
    """The small closed types generated terms range over."""

    NAT = "nat"
    BOOL = "bool"
    UNIT = "unit"
    NAT_TO_NAT = "nat -> nat"
    COPROD = "coprod nat bool"
    PAIR = "total2 (fun _ : nat => bool)"

    def term(self) -> t.Term:
        return _SORT_TERMS[self]()


_SORT_TERMS: typing.Mapping[Sort, typing.Callable[[], t.Term]] = {
    Sort.NAT: t.Nat,
    Sort.BOOL: t.Bool,
    Sort.UNIT: t.Unit,
    Sort.NAT_TO_NAT: lambda: t.Pi(t.Nat(), t.Nat()),
    Sort.COPROD: lambda: t.Coprod(t.Nat(), t.Bool()),
    Sort.PAIR: lambda: t.Sigma(t.Nat(), t.Bool()),
}


@dataclasses.dataclass(frozen=True)
class CorpusConfig:
    seed: int = 0
    size: int = 500
    depth: int = 4
    max_numeral: int = 3
    inject_axioms: int = 0


def _constant_motive(domain: Sort, target: Sort) -> t.Term:
    return t.Lam(domain.term(), target.term(), "_")


class TermGenerator:
    """Random closed terms of a requested sort; contexts list sorts innermost last."""

    def __init__(self, rng: random.Random, max_numeral: int = 3) -> None:
        self.rng = rng
        self.max_numeral = max_numeral

    def numeral(self) -> t.Term:
        return to_numeral(self.rng.randint(0, self.max_numeral))

    def variable(self, sort: Sort, ctx: typing.Sequence[Sort]) -> typing.Optional[t.Term]:
        indices = [len(ctx) - 1 - i for i, s in enumerate(ctx) if s is sort]
        return t.Var(self.rng.choice(indices)) if indices else None

    def generate(self, sort: Sort, depth: int, ctx: typing.Sequence[Sort] = ()) -> t.Term:
        builder = getattr(self, f"_{sort.name.lower()}")
        return builder(depth, tuple(ctx))

    def _leaf(self, sort: Sort, ctx) -> t.Term:
        variable = self.variable(sort, ctx)
        if variable is not None and self.rng.random() < 0.5:
            return variable
        if sort is Sort.NAT:
            return self.numeral()
        return self.generate(sort, 0, ctx)

    def _nat(self, depth: int, ctx) -> t.Term:
        if depth <= 0:
            return self._leaf(Sort.NAT, ctx)
        d = depth - 1
        nat = lambda inner=ctx: self.generate(Sort.NAT, d, inner)
        choice = self.rng.randrange(10)
        if choice == 0:
            return t.Succ(nat())
        if choice == 1:
            return t.App(self.generate(Sort.NAT_TO_NAT, d, ctx), nat())
        if choice == 2:
            return t.ElimNat(
                _constant_motive(Sort.NAT, Sort.NAT),
                nat(),
                t.Lam(t.Nat(), t.Lam(t.Nat(), nat(ctx + (Sort.NAT, Sort.NAT)), "r"), "n"),
                self._leaf(Sort.NAT, ctx),
            )
        if choice == 3:
            return t.ElimBool(
                _constant_motive(Sort.BOOL, Sort.NAT),
                nat(),
                nat(),
                self.generate(Sort.BOOL, d, ctx),
            )
        if choice == 4:
            return t.ElimCoprod(
                _constant_motive(Sort.COPROD, Sort.NAT),
                t.Lam(t.Nat(), nat(ctx + (Sort.NAT,)), "a"),
                t.Lam(t.Bool(), nat(ctx + (Sort.BOOL,)), "b"),
                self.generate(Sort.COPROD, d, ctx),
            )
        if choice == 5:
            return t.ElimSigma(
                _constant_motive(Sort.PAIR, Sort.NAT),
                t.Lam(t.Nat(), t.Lam(t.Bool(), nat(ctx + (Sort.NAT, Sort.BOOL)), "b"), "a"),
                self.generate(Sort.PAIR, d, ctx),
            )
        if choice == 6:
            return t.ElimUnit(_constant_motive(Sort.UNIT, Sort.NAT), nat(), t.Tt())
        if choice == 7:
            point = self.numeral()
            motive = t.Lam(
                t.Nat(), t.Lam(t.Paths(t.Nat(), point, t.Var(0)), t.Nat(), "e"), "y"
            )
            return t.ElimPaths(motive, nat(), t.Refl(t.Nat(), point))
        if choice == 8:
            return t.App(t.Lam(t.Nat(), nat(ctx + (Sort.NAT,)), "x"), nat())
        return self._leaf(Sort.NAT, ctx)

    def _bool(self, depth: int, ctx) -> t.Term:
        if depth <= 0:
            variable = self.variable(Sort.BOOL, ctx)
            if variable is not None and self.rng.random() < 0.5:
                return variable
            return self.rng.choice((t.TrueC(), t.FalseC()))
        d = depth - 1
        choice = self.rng.randrange(3)
        if choice == 0:
            return t.ElimBool(
                _constant_motive(Sort.BOOL, Sort.BOOL),
                self.generate(Sort.BOOL, d, ctx),
                self.generate(Sort.BOOL, d, ctx),
                self.generate(Sort.BOOL, d, ctx),
            )
        if choice == 1:
            return t.ElimNat(
                _constant_motive(Sort.NAT, Sort.BOOL),
                t.TrueC(),
                t.Lam(t.Nat(), t.Lam(t.Bool(), t.FalseC(), "r"), "n"),
                self.generate(Sort.NAT, d, ctx),
            )
        return self._bool(0, ctx)

    def _unit(self, depth: int, ctx) -> t.Term:
        return t.Tt()

    def _nat_to_nat(self, depth: int, ctx) -> t.Term:
        if self.rng.random() < 0.3:
            return t.Lam(t.Nat(), t.Succ(t.Var(0)), "n")
        return t.Lam(t.Nat(), self.generate(Sort.NAT, depth - 1, ctx + (Sort.NAT,)), "n")

    def _coprod(self, depth: int, ctx) -> t.Term:
        if self.rng.random() < 0.5:
            return t.InL(t.Nat(), t.Bool(), self.generate(Sort.NAT, depth - 1, ctx))
        return t.InR(t.Nat(), t.Bool(), self.generate(Sort.BOOL, depth - 1, ctx))

    def _pair(self, depth: int, ctx) -> t.Term:
        return t.Pair(
            Sort.PAIR.term(),
            self.generate(Sort.NAT, depth - 1, ctx),
            self.generate(Sort.BOOL, depth - 1, ctx),
        )


def blocked_term(generator: TermGenerator) -> t.Term:
    """A nat-typed term whose computation is blocked on the injected axiom."""
    return t.ElimNat(
        _constant_motive(Sort.NAT, Sort.NAT),
        generator.numeral(),
        t.Lam(t.Nat(), t.Lam(t.Nat(), t.Succ(t.Var(0)), "r"), "n"),
        t.Axiom(BLOCKING_AXIOM),
    )


def generate_corpus(config: CorpusConfig) -> typing.List[t.Term]:
    """`config.size` closed nat terms, the first `inject_axioms` of them blocked."""
    rng = random.Random(config.seed)
    generator = TermGenerator(rng, config.max_numeral)
    corpus = [blocked_term(generator) for _ in range(min(config.inject_axioms, config.size))]
    while len(corpus) < config.size:
        corpus.append(generator.generate(Sort.NAT, config.depth))
    return corpus


def corpus_env(mode: UniverseMode = UniverseMode.STRICT) -> GlobalEnv:
    env = GlobalEnv(mode)
    checker.register(env, checker.Postulate(BLOCKING_AXIOM, t.Nat()))
    return env


@dataclasses.dataclass(frozen=True)
class CanonicityOutcome:
    index: int
    term: t.Term
    classification: typing.Optional[Classification]
    compute_form: typing.Optional[t.Term] = None
    lazy_form: typing.Optional[t.Term] = None
    compute_steps: int = 0
    lazy_steps: int = 0
    error: typing.Optional[str] = None

    @property
    def agree(self) -> bool:
        return (
            self.compute_form is not None
            and self.lazy_form is not None
            and t.struct_eq(self.compute_form, self.lazy_form)
        )

    @property
    def violation(self) -> bool:
        return (
            self.error is not None
            or not isinstance(self.classification, Numeral)
            or not self.agree
        )


@dataclasses.dataclass(frozen=True)
class CanonicitySummary:
    outcomes: typing.Tuple[CanonicityOutcome, ...]
    millis: float

    @property
    def total(self) -> int:
        return len(self.outcomes)

    @property
    def numerals(self) -> int:
        return sum(isinstance(o.classification, Numeral) for o in self.outcomes)

    @property
    def stuck(self) -> int:
        return sum(isinstance(o.classification, Stuck) for o in self.outcomes)

    @property
    def disagreements(self) -> int:
        return sum(o.error is None and not o.agree for o in self.outcomes)

    @property
    def errors(self) -> int:
        return sum(o.error is not None for o in self.outcomes)

    @property
    def violations(self) -> typing.List[CanonicityOutcome]:
        return [o for o in self.outcomes if o.violation]

    def as_dict(self) -> typing.Dict[str, typing.Any]:
        return {
            "total": self.total,
            "numerals": self.numerals,
            "stuck": self.stuck,
            "disagreements": self.disagreements,
            "errors": self.errors,
            "millis": self.millis,
            "violations": [
                {"index": o.index, "classification": str(o.classification), "error": o.error}
                for o in self.violations
            ],
        }


def check_term(
    env: GlobalEnv, index: int, term: t.Term, fuel: int = DEFAULT_FUEL
) -> CanonicityOutcome:
    try:
        elaborated, ty = checker.elaborate(env, checker.Context(), term, fuel)
        if not isinstance(ty, t.Nat):
            raise UvkError(f"generated term has type {ty}, not nat")
        computed = Evaluator(env, Strategy.COMPUTE, fuel)
        compute_form = quote(computed.eval(elaborated), 0)
        delayed = Evaluator(env, Strategy.LAZY, fuel)
        lazy_form = quote(delayed.eval(elaborated), 0)
    except UvkError as exc:
        return CanonicityOutcome(index, term, None, error=str(exc))
    return CanonicityOutcome(
        index,
        term,
        classify(compute_form, ty),
        compute_form,
        lazy_form,
        computed.steps,
        delayed.steps,
    )


def run_canonicity(
    config: CorpusConfig,
    fuel: int = DEFAULT_FUEL,
    env: typing.Optional[GlobalEnv] = None,
) -> CanonicitySummary:
    start = time.perf_counter()
    env = env if env is not None else corpus_env()
    outcomes = tuple(
        check_term(env, index, term, fuel)
        for index, term in enumerate(generate_corpus(config))
    )
    summary = CanonicitySummary(outcomes, round((time.perf_counter() - start) * 1000, 3))
    log.info(
        f"Canonicity corpus of {summary.total}: {summary.numerals} numerals, "
        f"{summary.stuck} stuck, {summary.disagreements} disagreements"
    )
    return summary
