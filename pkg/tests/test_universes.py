import random

import pytest

from uvk.errors import UniverseError
from uvk.syntax.terms import ConcreteLevel
from uvk.universes import LevelGraph, Relation, UniverseMode


@pytest.fixture
def graph() -> LevelGraph:
    return LevelGraph(UniverseMode.STRICT)


def test_strict_cycle_through_lt_is_rejected(graph):
    a, b = graph.fresh_level(), graph.fresh_level()
    graph.add_lt(a, b)
    with graph.provenance("bad"):
        with pytest.raises(UniverseError) as info:
            graph.add_le(b, a)
    assert info.value.cycle[0] == b
    assert "bad" in info.value.provenance
    graph.check_satisfiable()


def test_le_cycles_are_fine(graph):
    a, b = graph.fresh_level(), graph.fresh_level()
    graph.add_le(a, b)
    graph.add_le(b, a)
    graph.check_satisfiable()
    assignment = graph.assignment()
    assert assignment[a] == assignment[b]


def test_self_lt_is_rejected(graph):
    a = graph.fresh_level()
    with pytest.raises(UniverseError):
        graph.add_lt(a, a)


def test_concrete_levels_are_ordered(graph):
    graph.add_lt(ConcreteLevel(0), ConcreteLevel(2))
    with pytest.raises(UniverseError):
        graph.add_lt(ConcreteLevel(1), ConcreteLevel(1))
    with pytest.raises(UniverseError):
        graph.add_le(ConcreteLevel(3), ConcreteLevel(2))


def test_off_mode_accepts_cycles():
    graph = LevelGraph(UniverseMode.OFF)
    a, b = graph.fresh_level(), graph.fresh_level()
    graph.add_lt(a, b)
    with graph.provenance("back"):
        graph.add_lt(b, a)
    with pytest.raises(UniverseError) as info:
        graph.check_satisfiable()
    cycle = info.value.cycle
    assert cycle[0] == cycle[-1]
    assert set(cycle) == {a, b}
    assert "back" in info.value.provenance


def test_transaction_rolls_back_on_failure(graph):
    a, b = graph.fresh_level(), graph.fresh_level()
    graph.add_lt(a, b)
    levels, constraints = graph.level_count, graph.constraint_count
    with pytest.raises(UniverseError):
        with graph.transaction():
            c = graph.fresh_level()
            graph.add_le(b, c)
            graph.add_le(c, a)
    assert graph.level_count == levels
    assert graph.constraint_count == constraints
    graph.check_satisfiable()


def test_successor_and_maximum_are_shared(graph):
    a, b = graph.fresh_level(), graph.fresh_level()
    assert graph.successor(a) == graph.successor(a)
    assert graph.successor(ConcreteLevel(2)) == ConcreteLevel(3)
    top = graph.maximum(a, b)
    assert graph.maximum(b, a) == top
    assert graph.maximum(a, ConcreteLevel(0)) == a


def test_assignment_is_least(graph):
    a, b = graph.fresh_level(), graph.fresh_level()
    graph.add_lt(ConcreteLevel(0), a)
    graph.add_lt(a, b)
    assignment = graph.assignment()
    assert assignment[a] == 1
    assert assignment[b] == 2


def test_copy_is_independent(graph):
    a = graph.fresh_level()
    clone = graph.copy()
    clone.add_lt(a, clone.fresh_level())
    assert graph.constraint_count == 0
    assert clone.constraint_count == 1


@pytest.mark.parametrize("seed", range(100))
def test_assignment_satisfies_random_acyclic_graphs(seed):
    rng = random.Random(seed)
    graph = LevelGraph(UniverseMode.STRICT)
    size = rng.choice([2, 12, 50, 200]) if seed < 20 else rng.randint(2, 200)
    levels = [graph.fresh_level() for _ in range(size)]
    for _ in range(rng.randint(1, 3 * size)):
        lower, upper = sorted(rng.sample(range(len(levels)), 2))
        add = graph.add_lt if rng.random() < 0.5 else graph.add_le
        add(levels[lower], levels[upper])
    assignment = graph.assignment()
    for constraint in graph.constraints():
        lhs, rhs = assignment[constraint.lhs], assignment[constraint.rhs]
        assert lhs < rhs if constraint.relation is Relation.LT else lhs <= rhs


def test_implied_constraints_leave_the_graph_alone(graph, monkeypatch):
    a, b = graph.fresh_level(), graph.fresh_level()
    graph.add_lt(a, b)
    before = list(graph.constraints())

    def fail(*args):
        raise AssertionError("cycle search ran for an implied edge")

    monkeypatch.setattr(graph, "_closing_cycle", fail)
    graph.add_lt(a, b)
    graph.add_le(a, b)
    assert list(graph.constraints()) == before


def test_le_edge_is_strengthened_to_lt(graph):
    a, b = graph.fresh_level(), graph.fresh_level()
    graph.add_le(a, b)
    graph.add_lt(a, b)
    assert [constraint.relation for constraint in graph.constraints()] == [Relation.LT]
    with pytest.raises(UniverseError):
        graph.add_le(b, a)


def test_assignment_of_an_unsatisfiable_graph_raises_the_cycle():
    graph = LevelGraph(UniverseMode.OFF)
    a = graph.fresh_level()
    graph.add_lt(a, a)
    with pytest.raises(UniverseError) as info:
        graph.assignment()
    assert info.value.cycle == [a, a]


def _random_constraints(rng, levels, count):
    for _ in range(count):
        lhs, rhs = rng.sample(levels, 2)
        yield lhs, Relation.LT if rng.random() < 0.3 else Relation.LE, rhs


def _relations(graph):
    return {(c.lhs, c.rhs): c.relation for c in graph.constraints()}


@pytest.mark.parametrize("seed", range(60))
def test_rejected_cycles_replay_to_their_closing_edge(seed):
    rng = random.Random(seed)
    graph = LevelGraph(UniverseMode.STRICT)
    size = rng.randint(3, 200)
    levels = [graph.fresh_level() for _ in range(size)]
    attempted = None
    for lhs, relation, rhs in _random_constraints(rng, levels, 4 * size):
        try:
            graph.add_constraint(lhs, relation, rhs)
        except UniverseError as exc:
            attempted, cycle = relation, exc.cycle
            break
    if attempted is None:
        pytest.skip("sequence stayed satisfiable")
    assert cycle[0] == cycle[-1]
    relations = _relations(graph)
    path = list(zip(cycle[1:], cycle[2:]))
    assert all(edge in relations for edge in path)
    assert attempted is Relation.LT or Relation.LT in {relations[edge] for edge in path}
    replay = LevelGraph(UniverseMode.STRICT)
    for lhs, rhs in path:
        replay.add_constraint(lhs, relations[lhs, rhs], rhs)
    with pytest.raises(UniverseError):
        replay.add_constraint(cycle[0], attempted, cycle[1])


@pytest.mark.parametrize("seed", range(60))
def test_strict_rejects_where_the_graph_first_becomes_unsatisfiable(seed):
    rng = random.Random(seed)
    strict, off = LevelGraph(UniverseMode.STRICT), LevelGraph(UniverseMode.OFF)
    levels = [strict.fresh_level() for _ in range(rng.randint(3, 60))]
    for index, (lhs, relation, rhs) in enumerate(_random_constraints(rng, levels, 200)):
        off.add_constraint(lhs, relation, rhs)
        try:
            off.check_satisfiable()
        except UniverseError:
            with pytest.raises(UniverseError):
                strict.add_constraint(lhs, relation, rhs)
            return
        strict.add_constraint(lhs, relation, rhs)
    strict.check_satisfiable()


@pytest.mark.parametrize("seed", range(40))
def test_off_mode_never_errors(seed):
    rng = random.Random(seed)
    graph = LevelGraph(UniverseMode.OFF)
    levels = [graph.fresh_level() for _ in range(rng.randint(1, 30))]
    levels += [ConcreteLevel(value) for value in range(4)]
    for _ in range(300):
        lhs, rhs = rng.choice(levels), rng.choice(levels)
        relation = rng.choice(list(Relation))
        graph.add_constraint(lhs, relation, rhs)
        graph.successor(lhs)
        graph.maximum(lhs, rhs)
