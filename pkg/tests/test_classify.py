from uvk.evaluator import BoolVal, Canonical, Numeral, Stuck, classify
from uvk.syntax import terms as t
from uvk.utils.numerals import to_numeral


def test_numerals():
    assert classify(to_numeral(3), t.Nat()) == Numeral(3)
    assert str(Numeral(3)) == "Numeral 3"


def test_booleans():
    assert classify(t.TrueC(), t.Bool()) == BoolVal(True)
    assert classify(t.FalseC(), t.Bool()) == BoolVal(False)
    assert str(BoolVal(False)) == "BoolVal false"


def test_successor_of_a_stuck_term_is_not_a_numeral():
    result = classify(t.Succ(t.Axiom("ax")), t.Nat())
    assert result == Stuck(axioms=frozenset({"ax"}))


def test_introductions_are_canonical_elsewhere():
    nat_paths = t.Paths(t.Nat(), t.Zero(), t.Zero())
    assert classify(t.Refl(t.Nat(), t.Zero()), nat_paths) == Canonical()
    assert classify(t.Lam(t.Nat(), t.Var(0)), t.Pi(t.Nat(), t.Nat())) == Canonical()
    assert classify(t.Nat(), t.Universe(t.ConcreteLevel(0))) == Canonical()
    assert str(Canonical()) == "Canonical"


def test_stuck_reports_every_blocker():
    term = t.ElimBool(t.Lam(t.Bool(), t.Nat()), t.Const("k"), t.Zero(), t.App(t.Axiom("ax"), t.Var(1)))
    result = classify(term, t.Nat())
    assert result == Stuck(frozenset({"ax"}), frozenset({1}), frozenset({"k"}))
    assert result.blockers == frozenset({"ax", "k", "#1"})
    assert str(result) == "Stuck{#1, ax, k}"


def test_bound_variables_are_not_blockers():
    term = t.ElimNat(
        t.Lam(t.Nat(), t.Nat()),
        t.Zero(),
        t.Lam(t.Nat(), t.Lam(t.Nat(), t.Var(0))),
        t.Axiom("ax"),
    )
    assert classify(term, t.Nat()).blockers == frozenset({"ax"})
