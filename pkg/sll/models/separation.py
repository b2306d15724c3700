"""d-separation by active-trail reachability.

Two nodes are d-connected given ``Z`` if a trail joins them on which every
head-to-head node is in ``Z`` or has a descendant in ``Z`` and every other
node is outside ``Z``. Instead of enumerating trails we walk states
``(node, direction)``: "up" when the node was entered from a child, "down"
when entered from a parent. Collider traversal is allowed exactly at nodes
in ``Z`` or with a descendant in ``Z``, i.e. the ancestors of ``Z``.
"""

from collections import deque

from ..core.errors import ArgumentError
from .graph import Dag, NodeSubset

_UP = 0
_DOWN = 1


def reachable(dag: Dag, source: int, given: NodeSubset) -> NodeSubset:
    """Nodes joined to ``source`` by an active trail given ``given``."""
    ancestors = dag.ancestors_of(given).mask
    observed = given.mask

    visited = set()
    found = 0
    queue = deque([(source, _UP)])
    while queue:
        node, direction = queue.popleft()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))

        is_observed = observed >> node & 1
        if not is_observed and node != source:
            found |= 1 << node

        if direction == _UP and not is_observed:
            for parent in NodeSubset(dag.parent_mask(node)):
                queue.append((parent, _UP))
            for child in NodeSubset(dag.child_mask(node)):
                queue.append((child, _DOWN))
        elif direction == _DOWN:
            if not is_observed:
                for child in NodeSubset(dag.child_mask(node)):
                    queue.append((child, _DOWN))
            if ancestors >> node & 1:
                for parent in NodeSubset(dag.parent_mask(node)):
                    queue.append((parent, _UP))
    return NodeSubset(found)


def d_separated(dag: Dag, u: int, v: int, given: NodeSubset = NodeSubset()) -> bool:
    for node in (u, v):
        if not 0 <= node < dag.n:
            raise ArgumentError(f"invalid node {node!r} for a graph on {dag.n} nodes")
    if u == v:
        raise ArgumentError("d-separation needs two distinct nodes")
    if u in given or v in given:
        raise ArgumentError("the conditioning set must not contain the queried nodes")
    if not given.issubset(NodeSubset.full(dag.n)):
        raise ArgumentError("conditioning set outside the node range")
    return v not in reachable(dag, int(u), given)
