"""Graph primitives: node subsets, DAGs and partially directed graphs.

Nodes are dense integer indices ``0..n-1``. Names live on the dataset and
network objects; graphs only ever see indices.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, List, Sequence, Set, Tuple

import networkx as nx

from ..core.errors import ArgumentError

Arc = Tuple[int, int]
Edge = Tuple[int, int]  # unordered pair stored as (min, max)


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class NodeSubset:
    """Immutable set of node indices backed by an integer bitmask."""

    mask: int = 0

    @classmethod
    def of(cls, nodes: Iterable[int]) -> "NodeSubset":
        mask = 0
        for node in nodes:
            node = int(node)
            if node < 0:
                raise ArgumentError(f"negative node index {node}")
            mask |= 1 << node
        return cls(mask)

    @classmethod
    def full(cls, n: int) -> "NodeSubset":
        return cls((1 << n) - 1)

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, node: object) -> bool:
        return isinstance(node, numbers.Integral) and node >= 0 and bool(self.mask >> int(node) & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __or__(self, other: "NodeSubset") -> "NodeSubset":
        return NodeSubset(self.mask | other.mask)

    def __and__(self, other: "NodeSubset") -> "NodeSubset":
        return NodeSubset(self.mask & other.mask)

    def __sub__(self, other: "NodeSubset") -> "NodeSubset":
        return NodeSubset(self.mask & ~other.mask)

    def __xor__(self, other: "NodeSubset") -> "NodeSubset":
        return NodeSubset(self.mask ^ other.mask)

    def __le__(self, other: "NodeSubset") -> bool:
        return self.issubset(other)

    def __ge__(self, other: "NodeSubset") -> bool:
        return self.issuperset(other)

    def issubset(self, other: "NodeSubset") -> bool:
        return self.mask & ~other.mask == 0

    def issuperset(self, other: "NodeSubset") -> bool:
        return other.mask & ~self.mask == 0

    def add(self, node: int) -> "NodeSubset":
        return NodeSubset(self.mask | (1 << node))

    def remove(self, node: int) -> "NodeSubset":
        return NodeSubset(self.mask & ~(1 << node))

    def to_list(self) -> List[int]:
        return list(self)

    def __repr__(self) -> str:
        return f"NodeSubset({self.to_list()})"


class Dag:
    """Directed acyclic graph over nodes ``0..n-1``.

    Instances are immutable; ``with_arc``/``without_arc``/``with_reversed``
    return new graphs and reject any change that would close a cycle.
    """

    __slots__ = ("n", "_parents", "_children", "_arcs")

    def __init__(self, n: int, arcs: Iterable[Arc] = ()):
        if n < 0:
            raise ArgumentError("node count must be non-negative")
        parents = [0] * n
        children = [0] * n
        arc_set: Set[Arc] = set()
        for u, v in arcs:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise ArgumentError(f"arc ({u}, {v}) outside node range 0..{n - 1}")
            if u == v:
                raise ArgumentError(f"self-arc on node {u}")
            if (u, v) in arc_set:
                raise ArgumentError(f"duplicate arc ({u}, {v})")
            arc_set.add((u, v))
            parents[v] |= 1 << u
            children[u] |= 1 << v
        self.n = n
        self._parents = tuple(parents)
        self._children = tuple(children)
        self._arcs = frozenset(arc_set)
        if arc_set:
            graph = self.to_networkx()
            if not nx.is_directed_acyclic_graph(graph):
                cycle = nx.find_cycle(graph)
                raise ArgumentError(f"arcs contain a directed cycle: {cycle}")

    @classmethod
    def from_parent_masks(cls, masks: Sequence[int]) -> "Dag":
        arcs = [(u, v) for v, mask in enumerate(masks) for u in NodeSubset(mask)]
        return cls(len(masks), arcs)

    @property
    def arcs(self) -> FrozenSet[Arc]:
        return self._arcs

    def sorted_arcs(self) -> List[Arc]:
        return sorted(self._arcs)

    def parent_mask(self, v: int) -> int:
        return self._parents[v]

    def child_mask(self, v: int) -> int:
        return self._children[v]

    def parent_masks(self) -> Tuple[int, ...]:
        return self._parents

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self._arcs

    def adjacent(self, u: int, v: int) -> bool:
        return (u, v) in self._arcs or (v, u) in self._arcs

    def reaches(self, source: int, target: int) -> bool:
        """Whether a directed path leads from ``source`` to ``target``."""
        if source == target:
            return True
        seen = 1 << source
        frontier = self._children[source]
        while frontier:
            if frontier >> target & 1:
                return True
            seen |= frontier
            nxt = 0
            for node in NodeSubset(frontier):
                nxt |= self._children[node]
            frontier = nxt & ~seen
        return False

    def descendants(self, v: int) -> NodeSubset:
        seen = 0
        frontier = self._children[v]
        while frontier:
            seen |= frontier
            nxt = 0
            for node in NodeSubset(frontier):
                nxt |= self._children[node]
            frontier = nxt & ~seen
        return NodeSubset(seen)

    def ancestors_of(self, nodes: NodeSubset) -> NodeSubset:
        """``nodes`` together with all their ancestors."""
        seen = nodes.mask
        frontier = nodes.mask
        while frontier:
            nxt = 0
            for node in NodeSubset(frontier):
                nxt |= self._parents[node]
            frontier = nxt & ~seen
            seen |= frontier
        return NodeSubset(seen)

    def with_arc(self, u: int, v: int) -> "Dag":
        return Dag(self.n, set(self._arcs) | {(u, v)})

    def without_arc(self, u: int, v: int) -> "Dag":
        if (u, v) not in self._arcs:
            raise ArgumentError(f"no arc ({u}, {v}) to remove")
        return Dag(self.n, set(self._arcs) - {(u, v)})

    def with_reversed(self, u: int, v: int) -> "Dag":
        if (u, v) not in self._arcs:
            raise ArgumentError(f"no arc ({u}, {v}) to reverse")
        return Dag(self.n, (set(self._arcs) - {(u, v)}) | {(v, u)})

    def topological_order(self) -> List[int]:
        return list(nx.lexicographical_topological_sort(self.to_networkx()))

    def max_indegree(self) -> int:
        return max((bin(mask).count("1") for mask in self._parents), default=0)

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self._arcs)
        return graph

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Dag) and self.n == other.n and self._arcs == other._arcs

    def __hash__(self) -> int:
        return hash((self.n, self._arcs))

    def __repr__(self) -> str:
        return f"Dag(n={self.n}, arcs={self.sorted_arcs()})"


class Pdag:
    """Partially directed graph: directed arcs plus undirected edges."""

    __slots__ = ("n", "directed", "undirected")

    def __init__(self, n: int, directed: Iterable[Arc] = (), undirected: Iterable[Edge] = ()):
        directed_set: Set[Arc] = set()
        undirected_set: Set[Edge] = set()
        for u, v in directed:
            u, v = int(u), int(v)
            self._check_pair(n, u, v)
            directed_set.add((u, v))
        for u, v in undirected:
            u, v = int(u), int(v)
            self._check_pair(n, u, v)
            undirected_set.add(_edge(u, v))
        directed_skeleton = {_edge(u, v) for u, v in directed_set}
        if len(directed_skeleton) != len(directed_set):
            raise ArgumentError("both directions of an arc are present")
        overlap = directed_skeleton & undirected_set
        if overlap:
            raise ArgumentError(f"edges both directed and undirected: {sorted(overlap)}")
        self.n = n
        self.directed: FrozenSet[Arc] = frozenset(directed_set)
        self.undirected: FrozenSet[Edge] = frozenset(undirected_set)

    @staticmethod
    def _check_pair(n: int, u: int, v: int) -> None:
        if not (0 <= u < n and 0 <= v < n):
            raise ArgumentError(f"edge ({u}, {v}) outside node range 0..{n - 1}")
        if u == v:
            raise ArgumentError(f"self-edge on node {u}")

    @classmethod
    def from_dag(cls, dag: Dag) -> "Pdag":
        return cls(dag.n, directed=dag.arcs)

    def skeleton(self) -> FrozenSet[Edge]:
        return frozenset({_edge(u, v) for u, v in self.directed} | self.undirected)

    def edge_type(self, u: int, v: int) -> str:
        """'->' / '<-' relative to (u, v), '--' for undirected, '' when absent."""
        if (u, v) in self.directed:
            return "->"
        if (v, u) in self.directed:
            return "<-"
        if _edge(u, v) in self.undirected:
            return "--"
        return ""

    def is_fully_directed(self) -> bool:
        return not self.undirected

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Pdag)
            and self.n == other.n
            and self.directed == other.directed
            and self.undirected == other.undirected
        )

    def __hash__(self) -> int:
        return hash((self.n, self.directed, self.undirected))

    def __repr__(self) -> str:
        return f"Pdag(n={self.n}, directed={sorted(self.directed)}, undirected={sorted(self.undirected)})"


def _check_node(dag: Dag, v: int) -> int:
    if isinstance(v, bool) or not isinstance(v, numbers.Integral) or not 0 <= v < dag.n:
        raise ArgumentError(f"invalid node {v!r} for a graph on {dag.n} nodes")
    return int(v)


def parents(dag: Dag, v: int) -> NodeSubset:
    v = _check_node(dag, v)
    return NodeSubset(dag.parent_mask(v))


def children(dag: Dag, v: int) -> NodeSubset:
    v = _check_node(dag, v)
    return NodeSubset(dag.child_mask(v))


def neighbors(dag: Dag, v: int) -> NodeSubset:
    v = _check_node(dag, v)
    return NodeSubset(dag.parent_mask(v) | dag.child_mask(v))


def spouses(dag: Dag, v: int) -> NodeSubset:
    """Nodes sharing a child with ``v`` and not adjacent to it."""
    v = _check_node(dag, v)
    co_parents = 0
    for child in NodeSubset(dag.child_mask(v)):
        co_parents |= dag.parent_mask(child)
    adjacent = dag.parent_mask(v) | dag.child_mask(v) | (1 << v)
    return NodeSubset(co_parents & ~adjacent)


def common_children(dag: Dag, u: int, v: int) -> NodeSubset:
    return NodeSubset(dag.child_mask(u) & dag.child_mask(v))


def true_markov_blanket(dag: Dag, t: int) -> NodeSubset:
    return neighbors(dag, t) | spouses(dag, t)


def v_structures(dag: Dag) -> List[Tuple[int, int, int]]:
    """All unshielded colliders ``(s, u, t)`` with ``s < t``, sorted."""
    found = []
    for u in range(dag.n):
        pars = NodeSubset(dag.parent_mask(u)).to_list()
        for i, s in enumerate(pars):
            for t in pars[i + 1:]:
                if not dag.adjacent(s, t):
                    found.append((s, u, t))
    return sorted(found)


def skeleton(dag: Dag) -> FrozenSet[Edge]:
    return frozenset(_edge(u, v) for u, v in dag.arcs)
