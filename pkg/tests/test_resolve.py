import pytest

from uvk.errors import ArityError, ResolveError, UnknownIdentifier
from uvk.kernel import GlobalEnv, Postulate, register
from uvk.syntax import terms as t
from uvk.syntax.parser import parse_file, parse_term
from uvk.syntax.pretty import pretty
from uvk.syntax.resolve import resolve, resolve_term


def _resolve(text, env, names=()):
    return resolve_term(parse_term(text), env, names)


def test_locals_become_indices(env):
    term = _resolve("fun (x y : nat) => x", env)
    assert term == t.Lam(t.Nat(), t.Lam(t.Nat(), t.Var(1)))


def test_shadowing_picks_innermost(env):
    term = _resolve("fun (x : nat) (x : bool) => x", env)
    assert term.body.body == t.Var(0)


def test_numerals_and_builtins(env):
    assert _resolve("3", env) == t.Succ(t.Succ(t.Succ(t.Zero())))
    assert _resolve("S O", env) == t.Succ(t.Zero())
    assert _resolve("paths nat 0 0", env) == t.Paths(t.Nat(), t.Zero(), t.Zero())


def test_bare_successor_is_a_function(env):
    assert _resolve("S", env) == t.Lam(t.Nat(), t.Succ(t.Var(0)))


def test_local_binder_shadows_builtin(env):
    term = _resolve("fun (nat : UU) (n : nat) => n", env)
    assert term.body.domain == t.Var(0)


def test_extra_arguments_apply(env):
    term = _resolve("fun (f : nat -> nat) => idpath (nat -> nat) f 0", env)
    head, args = t.spine(term.body)
    assert isinstance(head, t.Refl)
    assert args == [t.Zero()]


def test_arity_error_names_missing_argument(env):
    with pytest.raises(ArityError) as info:
        _resolve("paths nat 0", env)
    assert "3rd" in str(info.value)


def test_sigma_needs_annotated_family(env):
    term = _resolve("total2 (fun x : nat => paths nat x x)", env)
    assert isinstance(term, t.Sigma)
    assert term.domain == t.Nat()
    with pytest.raises(ResolveError):
        _resolve("fun (P : nat -> UU) => total2 P", env)


def test_globals_and_postulates(env):
    register(env, Postulate("ax", t.Nat()))
    assert _resolve("ax", env) == t.Axiom("ax")
    with pytest.raises(UnknownIdentifier) as info:
        _resolve("missing", env)
    assert info.value.name == "missing"
    assert "unknown identifier 'missing'" in str(info.value)


def test_visibility_filter(env):
    register(env, Postulate("hidden", t.Nat()))
    with pytest.raises(UnknownIdentifier):
        resolve_term(parse_term("hidden"), env, visible=lambda name: False)


def test_definition_parameters_fold_into_pi_and_lambda(env):
    (command,) = parse_file("Definition k (A B : UU) (a : A) (b : B) : A := a.")
    resolved = resolve(command, env)
    assert resolved.binders == ()
    assert isinstance(resolved.type, t.Pi)
    assert isinstance(resolved.body.body.body.body, t.Var)
    assert resolved.body.body.body.body.index == 1


def test_let_is_a_beta_redex(env):
    term = _resolve("let n := 2 in S n", env)
    assert isinstance(term, t.App)
    assert isinstance(term.fn, t.Lam)
    assert term.arg == t.Succ(t.Succ(t.Zero()))


def test_pretty_output_resolves_back(env):
    term = _resolve(
        "fun (A : UU) (a : A) => total2 (fun x : A => paths A x a)", env
    )
    text = pretty(term)
    again = _resolve(text, env)
    assert t.struct_eq(term, again)
