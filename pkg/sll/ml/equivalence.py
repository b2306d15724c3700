"""Markov equivalence classes: Meek orientation rules, CPDAGs and DAG extensions."""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np

from ..models.graph import Arc, Dag, Edge, NodeSubset, Pdag, v_structures

logger = logging.getLogger(__name__)


class OrientationState:
    """Mutable PDAG builder used while orienting edges.

    ``parents``/``children`` hold directed arcs, ``undirected`` holds edges
    not yet oriented, all as per-node bitmasks. ``committed`` lists the
    v-structures ``(s, u, t)`` that were oriented explicitly.
    """

    def __init__(
        self,
        n: int,
        directed: Iterable[Arc] = (),
        undirected: Iterable[Edge] = (),
        committed: Iterable[Tuple[int, int, int]] = (),
    ):
        self.n = n
        self.parents = [0] * n
        self.children = [0] * n
        self.undirected = [0] * n
        self.committed: List[Tuple[int, int, int]] = list(committed)
        for u, v in undirected:
            self.undirected[u] |= 1 << v
            self.undirected[v] |= 1 << u
        for u, v in directed:
            self.undirected[u] &= ~(1 << v)
            self.undirected[v] &= ~(1 << u)
            self.parents[v] |= 1 << u
            self.children[u] |= 1 << v

    @classmethod
    def from_pdag(cls, pdag: Pdag) -> "OrientationState":
        return cls(pdag.n, pdag.directed, pdag.undirected)

    def copy(self) -> "OrientationState":
        clone = OrientationState(self.n, committed=self.committed)
        clone.parents = list(self.parents)
        clone.children = list(self.children)
        clone.undirected = list(self.undirected)
        return clone

    def adjacency(self, v: int) -> int:
        return self.parents[v] | self.children[v] | self.undirected[v]

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.adjacency(u) >> v & 1)

    def is_undirected(self, u: int, v: int) -> bool:
        return bool(self.undirected[u] >> v & 1)

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.children[u] >> v & 1)

    def reaches(self, source: int, target: int) -> bool:
        """Directed path ``source -> ... -> target`` over oriented arcs only."""
        if source == target:
            return True
        seen = 1 << source
        frontier = self.children[source]
        while frontier:
            if frontier >> target & 1:
                return True
            seen |= frontier
            nxt = 0
            for node in NodeSubset(frontier):
                nxt |= self.children[node]
            frontier = nxt & ~seen
        return False

    def can_orient(self, u: int, v: int) -> bool:
        return self.is_undirected(u, v) and not self.reaches(v, u)

    def creates_v_structure(self, u: int, v: int) -> bool:
        """Whether ``u -> v`` would form a collider at ``v`` with a parent not adjacent to ``u``."""
        others = self.parents[v] & ~(1 << u)
        return bool(others & ~self.adjacency(u) & ~(1 << u))

    def orient(self, u: int, v: int) -> bool:
        if not self.can_orient(u, v):
            return False
        self.undirected[u] &= ~(1 << v)
        self.undirected[v] &= ~(1 << u)
        self.children[u] |= 1 << v
        self.parents[v] |= 1 << u
        return True

    def undirected_edges(self) -> List[Edge]:
        return [(u, v) for u in range(self.n) for v in NodeSubset(self.undirected[u]) if u < v]

    def directed_arcs(self) -> List[Arc]:
        return [(u, v) for u in range(self.n) for v in NodeSubset(self.children[u])]

    def to_pdag(self) -> Pdag:
        return Pdag(self.n, self.directed_arcs(), self.undirected_edges())


def _rule_enabled(state: OrientationState, a: int, b: int) -> bool:
    """Whether one of the four Meek rules orients the undirected edge ``a - b`` as ``a -> b``."""
    adj_b = state.adjacency(b) | 1 << b
    # R1: c -> a - b with c, b non-adjacent
    if state.parents[a] & ~adj_b:
        return True
    # R2: a -> c -> b
    if state.children[a] & state.parents[b]:
        return True
    # R3: a - c -> b, a - d -> b, c and d non-adjacent
    middle = NodeSubset(state.undirected[a] & state.parents[b]).to_list()
    for i, c in enumerate(middle):
        for d in middle[i + 1:]:
            if not state.adjacent(c, d):
                return True
    # R4: a - c -> d -> b, a adjacent to d, c and b non-adjacent
    adj_a = state.adjacency(a)
    for c in NodeSubset(state.undirected[a] & ~adj_b):
        if state.children[c] & state.parents[b] & adj_a:
            return True
    return False


def meek_orient(state: OrientationState, rng: Optional[np.random.Generator] = None) -> OrientationState:
    """Close ``state`` under the Meek rules; returns a new state.

    Candidate orientations are swept in ascending ``(a, b)`` order, or in a
    random order drawn from ``rng``. Orientations that would close a directed
    cycle are skipped.
    """
    result = state.copy()
    changed = True
    while changed:
        changed = False
        candidates = [(a, b) for a in range(result.n) for b in NodeSubset(result.undirected[a])]
        if rng is not None:
            candidates = [candidates[i] for i in rng.permutation(len(candidates))]
        for a, b in candidates:
            if result.is_undirected(a, b) and _rule_enabled(result, a, b) and result.orient(a, b):
                changed = True
    return result


def dag_to_cpdag(dag: Dag) -> Pdag:
    """Completed PDAG of the equivalence class of ``dag``."""
    colliders = v_structures(dag)
    state = OrientationState(dag.n, undirected=[tuple(sorted(arc)) for arc in dag.arcs], committed=colliders)
    for s, u, t in colliders:
        state.orient(s, u)
        state.orient(t, u)
    return meek_orient(state).to_pdag()


@dataclass(frozen=True)
class Extension:
    dag: Dag
    consistent: bool


def _sink_candidate(x: int, parents: List[int], children: List[int], undirected: List[int], alive: int) -> bool:
    if children[x] & alive:
        return False
    around = (parents[x] | undirected[x]) & alive
    for y in NodeSubset(undirected[x] & alive):
        adj_y = (parents[y] | children[y] | undirected[y]) & alive
        if (around & ~(1 << y)) & ~adj_y:
            return False
    return True


def extend_pdag(pdag: Pdag) -> Extension:
    """Orient every undirected edge without new v-structures or cycles, when possible.

    Repeatedly removes the smallest node that is a sink among directed arcs
    and whose undirected neighbors are adjacent to all its other neighbors,
    orienting its undirected edges toward it. When no such node exists the
    input has no consistent extension and an acyclic orientation is returned
    with ``consistent=False``.
    """
    n = pdag.n
    parents, children, undirected = [0] * n, [0] * n, [0] * n
    for u, v in pdag.directed:
        parents[v] |= 1 << u
        children[u] |= 1 << v
    for u, v in pdag.undirected:
        undirected[u] |= 1 << v
        undirected[v] |= 1 << u

    arcs = set(pdag.directed)
    alive = (1 << n) - 1
    while alive:
        sink = next(
            (x for x in NodeSubset(alive) if _sink_candidate(x, parents, children, undirected, alive)),
            None,
        )
        if sink is None:
            break
        for y in NodeSubset(undirected[sink] & alive):
            arcs.add((y, sink))
        alive &= ~(1 << sink)

    if not alive:
        return Extension(Dag(n, arcs), True)
    logger.warning("PDAG has no consistent extension; falling back to an acyclic orientation")
    return Extension(_acyclic_orientation(pdag), False)


def _acyclic_orientation(pdag: Pdag) -> Dag:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(pdag.n))
    for u, v in sorted(pdag.directed):
        if nx.has_path(graph, v, u):
            u, v = v, u
        graph.add_edge(u, v)
    rank = {node: i for i, node in enumerate(nx.lexicographical_topological_sort(graph))}
    for u, v in sorted(pdag.undirected):
        graph.add_edge(*((u, v) if rank[u] < rank[v] else (v, u)))
    return Dag(pdag.n, graph.edges())


def pdag_extend_to_dag(pdag: Pdag) -> Dag:
    return extend_pdag(pdag).dag
