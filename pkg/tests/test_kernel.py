import pytest

from uvk.errors import DuplicateName, FuelExhausted, TypingError, TypingErrorKind
from uvk.evaluator import values as v
from uvk.kernel import Context, Definition, GlobalEnv, Postulate, check, convertible, infer, register, whnf
from uvk.kernel.checker import Mode, Scope, TypeChecker
from uvk.syntax import terms as t
from uvk.syntax.parser import parse_term
from uvk.syntax.resolve import resolve_term
from uvk.universes import UniverseMode
from uvk.utils.numerals import to_numeral

UU0, UU1, UU2 = (t.Universe(t.ConcreteLevel(n)) for n in range(3))


def term(text, env, names=()):
    return resolve_term(parse_term(text), env, names)


def define(env, name, text, ty=None, opaque=False):
    body = term(text, env)
    return register(env, Definition(name, None if ty is None else term(ty, env), body, opaque))


@pytest.fixture
def arithmetic(env) -> GlobalEnv:
    define(env, "plus", "fun (n m : nat) => nat_rect (fun _ : nat => nat) m (fun _ r : nat => S r) n", "nat -> nat -> nat")
    return env


def test_infer_identity(env):
    ty, _ = infer(env, Context(), term("fun (x : nat) => x", env))
    assert t.struct_eq(ty, t.Pi(t.Nat(), t.Nat()))


def test_universes_climb(env):
    ty, _ = infer(env, Context(), UU0)
    assert ty == UU1
    ty, _ = infer(env, Context(), t.Nat())
    assert ty == UU0


def test_cumulativity(env):
    check(env, Context(), t.Nat(), UU1)
    check(env, Context(), UU0, UU2)


def test_universe_in_itself_fails_strict(env):
    with pytest.raises(TypingError) as info:
        check(env, Context(), UU1, UU1)
    assert info.value.kind is TypingErrorKind.UNIVERSE_ERROR
    assert info.value.universe_error is not None


def test_universe_in_itself_passes_off():
    env = GlobalEnv(UniverseMode.OFF)
    check(env, Context(), UU1, UU1)


def test_context_variables(env):
    ctx = Context().extend("A", UU0).extend("a", t.Var(0))
    ty, _ = infer(env, ctx, t.Var(0))
    assert ty == t.Var(1)


@pytest.mark.parametrize(
    "source, kind",
    [
        ("0 0", TypingErrorKind.NOT_A_FUNCTION),
        ("S true", TypingErrorKind.TYPE_MISMATCH),
        ("fun x => x", TypingErrorKind.CANNOT_INFER_HOLE),
        ("0 -> nat", TypingErrorKind.NOT_A_TYPE),
        ("bool_rect 0 true false true", TypingErrorKind.BAD_MOTIVE),
    ],
)
def test_error_kinds(env, source, kind):
    with pytest.raises(TypingError) as info:
        infer(env, Context(), term(source, env))
    assert info.value.kind is kind


def test_unbound_index(env):
    with pytest.raises(TypingError) as info:
        infer(env, Context(), t.Var(0))
    assert info.value.kind is TypingErrorKind.UNBOUND_INDEX


def test_mismatch_reports_both_sides(env):
    with pytest.raises(TypingError) as info:
        check(env, Context(), t.TrueC(), t.Nat())
    assert info.value.expected == t.Nat()
    assert info.value.actual == t.Bool()


def test_definitional_equality_by_computation(arithmetic):
    env = arithmetic
    assert convertible(env, Context(), term("plus 2 2", env), to_numeral(4))
    assert not convertible(env, Context(), term("plus 2 2", env), to_numeral(5))
    check(env, Context(), term("idpath nat 4", env), term("paths nat (plus 2 2) 4", env))


def test_open_terms_stay_neutral(arithmetic):
    env = arithmetic
    ctx = Context().extend("n", t.Nat())
    with pytest.raises(TypingError):
        # plus n 0 is stuck on n; it is not definitionally n.
        check(env, ctx, term("idpath nat n", env, ["n"]), term("paths nat (plus n 0) n", env, ["n"]))
    check(env, ctx, term("idpath nat (S n)", env, ["n"]), term("paths nat (plus 1 n) (S n)", env, ["n"]))


def test_whnf_exposes_head(arithmetic):
    env = arithmetic
    result = whnf(env, Context(), term("plus 1 1", env))
    assert isinstance(result, t.Succ)


def test_whnf_respects_fuel(arithmetic):
    with pytest.raises(FuelExhausted):
        whnf(arithmetic, Context(), term("plus 1 1", arithmetic), fuel=1)


def test_whnf_charges_scrutinee_steps(env):
    # Two beta steps in the scrutinee, then one iota step.
    source = term("bool_rect (fun _ : bool => nat) 0 1 ((fun b : bool => b) ((fun b : bool => b) true))", env)
    with pytest.raises(FuelExhausted):
        whnf(env, Context(), source, fuel=2)
    assert whnf(env, Context(), source, fuel=3) == t.Zero()


def test_conversion_memo_keeps_modes_apart(env):
    checker = TypeChecker(env)
    small, large = v.VUniverse(env.levels.fresh_level()), v.VUniverse(env.levels.fresh_level())
    assert checker.conv(0, small, large, Mode.LEQ)
    assert checker.conv(0, small, large, Mode.LEQ)
    assert env.levels.constraint_count == 1
    assert checker.conv(0, small, large, Mode.EQ)
    assert env.levels.constraint_count == 2


def test_identical_closures_convert_without_applying(env, monkeypatch):
    checker = TypeChecker(env)
    family = term("forall n : nat, paths nat n n", env)
    left, right = checker.eval(Scope(), family), checker.eval(Scope(), family)
    assert left is not right
    monkeypatch.setattr(v.Closure, "apply", lambda self, argument: pytest.fail("closure was applied"))
    assert checker.conv(0, left, right, Mode.EQ)


def test_register_rejects_duplicates(arithmetic):
    with pytest.raises(DuplicateName):
        define(arithmetic, "plus", "0")


def test_failed_register_leaves_env_untouched(env):
    levels, constraints = env.levels.level_count, env.levels.constraint_count
    with pytest.raises(TypingError):
        define(env, "bad", "true", "nat")
    assert "bad" not in env
    assert env.levels.level_count == levels
    assert env.levels.constraint_count == constraints


def test_opaque_definitions_do_not_unfold(env):
    define(env, "three", "3", "nat", opaque=True)
    assert not convertible(env, Context(), t.Const("three"), to_numeral(3))
    with pytest.raises(TypingError):
        check(env, Context(), term("idpath nat 3", env), term("paths nat three 3", env))


def test_axioms_of_follows_opaque_bodies(env):
    register(env, Postulate("ax", t.Nat()))
    register(env, Postulate("unused", t.Bool()))
    define(env, "hidden", "S ax", "nat", opaque=True)
    define(env, "visible", "S hidden", "nat")
    define(env, "clean", "0", "nat")
    assert env.axioms_of("visible") == frozenset({"ax"})
    assert env.axioms_of("ax") == frozenset({"ax"})
    assert env.axioms_of("clean") == frozenset()


def test_type_only_universe_cycle():
    # A definition whose value is its own type only checks without universes.
    strict = GlobalEnv(UniverseMode.STRICT)
    define(strict, "U", "UU")
    with pytest.raises(TypingError) as info:
        define(strict, "bad", "U", "U")
    assert info.value.kind is TypingErrorKind.UNIVERSE_ERROR
    assert "bad" in info.value.universe_error.provenance

    off = GlobalEnv(UniverseMode.OFF)
    define(off, "U", "UU")
    define(off, "bad", "U", "U")
    assert "bad" in off


def test_no_eta_for_functions(env):
    ctx = Context().extend("f", t.Pi(t.Nat(), t.Nat()))
    expanded = t.Lam(t.Nat(), t.App(t.Var(1), t.Var(0)))
    assert not convertible(env, ctx, t.Var(0), expanded)
    with pytest.raises(TypingError):
        check(env, ctx, term("idpath (nat -> nat) f", env, ["f"]), term("paths (nat -> nat) f (fun x : nat => f x)", env, ["f"]))


@pytest.mark.parametrize("level", range(3))
def test_empty_eliminates_into_any_universe(env, level):
    universe = t.Universe(t.ConcreteLevel(level))
    source = t.Lam(t.Empty(), t.ElimEmpty(t.Lam(t.Empty(), universe), t.Var(0)))
    ty, _ = infer(env, Context(), source)
    assert t.struct_eq(ty, t.Pi(t.Empty(), universe))
