"""
Universe levels and the constraint graph.

Every anonymous `UU` is a level variable. Checking a definition adds `<` and
`<=` edges between levels; in strict mode an edge that would close a cycle
through a `<` edge is rejected with a `UniverseError`, in off mode the
graph records everything and never complains.
"""
from __future__ import annotations

import contextlib
import enum
import logging
import typing

import networkx

from uvk.errors import UniverseError
from uvk.syntax.terms import ConcreteLevel, LevelExpr, LevelVar

log = logging.getLogger(__name__)


class UniverseMode(str, enum.Enum):
    STRICT = "strict"
    OFF = "off"


class Relation(str, enum.Enum):
    LT = "<"
    LE = "<="


class Constraint(typing.NamedTuple):
    lhs: LevelExpr
    relation: Relation
    rhs: LevelExpr
    provenance: typing.Optional[str]

    def __str__(self) -> str:
        return f"{self.lhs} {self.relation.value} {self.rhs}"


class LevelGraph:
    """A mutable set of level constraints owned by one checking session."""

    def __init__(self, mode: UniverseMode = UniverseMode.STRICT) -> None:
        self.mode = UniverseMode(mode)
        self._graph = networkx.DiGraph()
        self._successors: typing.Dict[LevelExpr, LevelExpr] = {}
        self._maxima: typing.Dict[typing.FrozenSet[LevelExpr], LevelExpr] = {}
        self._labels: typing.List[str] = []
        self._journal: typing.Optional[typing.List[typing.Callable[[], None]]] = None

    def __repr__(self) -> str:
        return (
            f"{type(self).__name__}(mode={self.mode.value}, "
            f"levels={self._graph.number_of_nodes()}, "
            f"constraints={self._graph.number_of_edges()})"
        )

    def __contains__(self, level: LevelExpr) -> bool:
        return level in self._graph

    @property
    def strict(self) -> bool:
        return self.mode is UniverseMode.STRICT

    @property
    def level_count(self) -> int:
        return self._graph.number_of_nodes()

    @property
    def constraint_count(self) -> int:
        return self._graph.number_of_edges()

    def constraints(self) -> typing.Iterator[Constraint]:
        for lhs, rhs, data in self._graph.edges(data=True):
            yield Constraint(lhs, data["relation"], rhs, data["provenance"])

    def copy(self) -> LevelGraph:
        clone = type(self)(self.mode)
        clone._graph = self._graph.copy()
        clone._successors = dict(self._successors)
        clone._maxima = dict(self._maxima)
        return clone

    @contextlib.contextmanager
    def provenance(self, label: str) -> typing.Iterator[None]:
        """Tag every constraint added inside the block with `label`."""
        self._labels.append(label)
        try:
            yield
        finally:
            self._labels.pop()

    @contextlib.contextmanager
    def transaction(self) -> typing.Iterator[None]:
        """Undo every change made inside the block if it raises."""
        if self._journal is not None:
            yield
            return
        self._journal = []
        try:
            yield
        except BaseException:
            journal, self._journal = self._journal, None
            for undo in reversed(journal):
                undo()
            log.debug(f"Rolled back {len(journal)} universe graph changes")
            raise
        else:
            self._journal = None

    def _record(self, undo: typing.Callable[[], None]) -> None:
        if self._journal is not None:
            self._journal.append(undo)

    def _ensure_node(self, level: LevelExpr) -> None:
        if level in self._graph:
            return
        self._graph.add_node(level)
        self._record(lambda: self._graph.remove_node(level))
        if isinstance(level, ConcreteLevel):
            self._link_concrete(level)

    def _link_concrete(self, level: ConcreteLevel) -> None:
        present = sorted(
            (node for node in self._graph if isinstance(node, ConcreteLevel)),
            key=lambda node: node.value,
        )
        index = present.index(level)
        if index > 0:
            self._add_edge(present[index - 1], level, Relation.LT, "concrete order")
        if index + 1 < len(present):
            self._add_edge(level, present[index + 1], Relation.LT, "concrete order")

    def _add_edge(
        self,
        lhs: LevelExpr,
        rhs: LevelExpr,
        relation: Relation,
        provenance: typing.Optional[str],
    ) -> None:
        if self._implied(lhs, relation, rhs):
            return
        if self._graph.has_edge(lhs, rhs):
            data = self._graph.edges[lhs, rhs]
            previous = dict(data)
            data.update(relation=relation, provenance=provenance)
            self._record(lambda: self._graph.edges[lhs, rhs].update(previous))
            return
        self._graph.add_edge(lhs, rhs, relation=relation, provenance=provenance)
        self._record(lambda: self._graph.remove_edge(lhs, rhs))

    def fresh_level(self) -> LevelVar:
        level = LevelVar()
        self._ensure_node(level)
        return level

    def add_constraint(
        self, lhs: LevelExpr, relation: Relation, rhs: LevelExpr
    ) -> None:
        """Record `lhs relation rhs`, raising `UniverseError` on a strict cycle."""
        relation = Relation(relation)
        label = self._labels[-1] if self._labels else None
        if lhs == rhs:
            if relation is Relation.LE:
                return
            if self.strict:
                raise UniverseError([lhs, lhs], [label] if label else [])
        if isinstance(lhs, ConcreteLevel) and lhs.value == 0 and relation is Relation.LE:
            return
        if isinstance(lhs, ConcreteLevel) and isinstance(rhs, ConcreteLevel):
            holds = lhs.value < rhs.value if relation is Relation.LT else lhs.value <= rhs.value
            if not holds and self.strict:
                raise UniverseError([lhs, rhs, lhs], [label] if label else [])
            return
        self._ensure_node(lhs)
        self._ensure_node(rhs)
        if self._implied(lhs, relation, rhs):
            return
        if self.strict:
            cycle = self._closing_cycle(lhs, rhs, relation)
            if cycle is not None:
                raise UniverseError(cycle, self._cycle_provenance(cycle, label))
        self._add_edge(lhs, rhs, relation, label)

    def _implied(self, lhs: LevelExpr, relation: Relation, rhs: LevelExpr) -> bool:
        if not self._graph.has_edge(lhs, rhs):
            return False
        return self._graph.edges[lhs, rhs]["relation"] is Relation.LT or relation is Relation.LE

    def _closing_cycle(
        self, lhs: LevelExpr, rhs: LevelExpr, relation: Relation
    ) -> typing.Optional[typing.List[LevelExpr]]:
        """A cycle through a `<` edge that the new edge lhs -> rhs would close."""
        if not networkx.has_path(self._graph, rhs, lhs):
            return None
        if relation is Relation.LT:
            return [lhs] + networkx.shortest_path(self._graph, rhs, lhs)
        reachable = networkx.descendants(self._graph, rhs) | {rhs}
        leading = networkx.ancestors(self._graph, lhs) | {lhs}
        for source, target, data in self._graph.edges(data=True):
            if (
                data["relation"] is Relation.LT
                and source in reachable
                and target in leading
            ):
                head = networkx.shortest_path(self._graph, rhs, source)
                tail = networkx.shortest_path(self._graph, target, lhs)
                return [lhs] + head + tail
        return None

    def _cycle_provenance(
        self, cycle: typing.Sequence[LevelExpr], current: typing.Optional[str]
    ) -> typing.List[str]:
        labels = []
        for lhs, rhs in zip(cycle, cycle[1:]):
            if self._graph.has_edge(lhs, rhs):
                label = self._graph.edges[lhs, rhs]["provenance"]
            else:
                label = current
            if label and label not in labels:
                labels.append(label)
        if current and current not in labels:
            labels.append(current)
        return labels

    def add_le(self, lhs: LevelExpr, rhs: LevelExpr) -> None:
        self.add_constraint(lhs, Relation.LE, rhs)

    def add_lt(self, lhs: LevelExpr, rhs: LevelExpr) -> None:
        self.add_constraint(lhs, Relation.LT, rhs)

    def add_eq(self, lhs: LevelExpr, rhs: LevelExpr) -> None:
        self.add_constraint(lhs, Relation.LE, rhs)
        self.add_constraint(rhs, Relation.LE, lhs)

    def successor(self, level: LevelExpr) -> LevelExpr:
        """The level of the universe that `UU level` inhabits."""
        if isinstance(level, ConcreteLevel):
            return ConcreteLevel(level.value + 1)
        if level not in self._successors:
            above = self.fresh_level()
            self.add_lt(level, above)
            self._successors[level] = above
            self._record(lambda: self._successors.pop(level, None))
        return self._successors[level]

    def maximum(self, left: LevelExpr, right: LevelExpr) -> LevelExpr:
        """A level bounding both arguments from above."""
        if left == right or right == ConcreteLevel(0):
            return left
        if left == ConcreteLevel(0):
            return right
        if isinstance(left, ConcreteLevel) and isinstance(right, ConcreteLevel):
            return ConcreteLevel(max(left.value, right.value))
        key = frozenset((left, right))
        if key not in self._maxima:
            bound = self.fresh_level()
            self.add_le(left, bound)
            self.add_le(right, bound)
            self._maxima[key] = bound
            self._record(lambda: self._maxima.pop(key, None))
        return self._maxima[key]

    def check_satisfiable(self) -> None:
        """Raise `UniverseError` with a cycle through a `<` edge, if the graph has one."""
        component_of = {}
        for index, component in enumerate(networkx.strongly_connected_components(self._graph)):
            component_of.update(dict.fromkeys(component, index))
        for lhs, rhs, data in self._graph.edges(data=True):
            if data["relation"] is Relation.LT and component_of[lhs] == component_of[rhs]:
                cycle = [lhs] + networkx.shortest_path(self._graph, rhs, lhs)
                raise UniverseError(cycle, self._cycle_provenance(cycle, None))

    def assignment(self) -> typing.Dict[LevelExpr, int]:
        """Least natural-number levels satisfying every recorded constraint."""
        self.check_satisfiable()
        condensed = networkx.condensation(self._graph)
        members = condensed.graph["mapping"]
        height: typing.Dict[int, int] = {}
        for component in networkx.topological_sort(condensed):
            floor = max(
                (
                    level.value
                    for level in condensed.nodes[component]["members"]
                    if isinstance(level, ConcreteLevel)
                ),
                default=0,
            )
            height[component] = floor
        for component in networkx.topological_sort(condensed):
            for level in condensed.nodes[component]["members"]:
                for _, successor, data in self._graph.out_edges(level, data=True):
                    target = members[successor]
                    if target == component:
                        continue
                    step = 1 if data["relation"] is Relation.LT else 0
                    height[target] = max(height[target], height[component] + step)
        result = {level: height[members[level]] for level in self._graph}
        for level, value in result.items():
            if isinstance(level, ConcreteLevel) and value != level.value:
                raise ValueError(f"level {level} is forced up to {value}")
        return result
