from uvk.syntax import terms as t
from uvk.utils.numerals import numeral_value, ordinal_number, to_numeral


def test_shift_respects_cutoff():
    term = t.Lam(t.Nat(), t.App(t.Var(0), t.Var(1)))
    shifted = t.shift(term, 2)
    assert shifted == t.Lam(t.Nat(), t.App(t.Var(0), t.Var(3)))


def test_instantiate_substitutes_outermost_binder():
    body = t.Succ(t.Var(0))
    assert t.instantiate(body, t.Zero()) == t.Succ(t.Zero())


def test_instantiate_shifts_under_binders():
    # (fun y => x y)[x := #0] keeps the free variable pointing outside.
    body = t.Lam(t.Nat(), t.App(t.Var(1), t.Var(0)))
    result = t.instantiate(body, t.Var(0))
    assert result == t.Lam(t.Nat(), t.App(t.Var(1), t.Var(0)))


def test_free_indices_and_closedness():
    term = t.Lam(t.Nat(), t.App(t.Var(0), t.Var(2)))
    assert t.free_indices(term) == {1}
    assert not t.is_closed(term)
    assert t.is_closed(term, depth=2)


def test_struct_eq_ignores_binder_names():
    left = t.Lam(t.Nat(), t.Var(0), "x")
    right = t.Lam(t.Nat(), t.Var(0), "y")
    assert t.struct_eq(left, right)
    assert not t.struct_eq(left, t.Lam(t.Bool(), t.Var(0), "x"))


def test_struct_eq_on_universes():
    assert t.struct_eq(t.Universe(t.LevelVar()), t.Universe(t.LevelVar()))
    assert t.struct_eq(t.Universe(t.ConcreteLevel(1)), t.Universe(t.ConcreteLevel(1)))
    assert not t.struct_eq(t.Universe(t.ConcreteLevel(0)), t.Universe(t.ConcreteLevel(1)))


def test_spine_and_apply_are_inverse():
    term = t.apply(t.Const("f"), t.Zero(), t.TrueC())
    head, args = t.spine(term)
    assert head == t.Const("f")
    assert args == [t.Zero(), t.TrueC()]
    assert t.apply(head, *args) == term


def test_constants_and_axioms():
    term = t.App(t.Const("f"), t.Axiom("ax"))
    assert t.constants(term) == {"f"}
    assert t.axioms(term) == {"ax"}


def test_numerals():
    assert numeral_value(to_numeral(5)) == 5
    assert numeral_value(t.Succ(t.Var(0))) is None
    assert [ordinal_number(n) for n in (1, 2, 3, 4, 11, 22)] == [
        "1st",
        "2nd",
        "3rd",
        "4th",
        "11th",
        "22nd",
    ]
