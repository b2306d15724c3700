"""Globally optimal DAG on a small node set by dynamic programming over subsets.

Two tables are built over a local re-indexing of the node set ``Z``:

* best parents: for every node ``v`` and every candidate set ``C`` of the
  other nodes, the best-scoring parent set inside ``C`` (size at most ``k``);
* sinks: for every ``W`` subset of ``Z``, the best score of a DAG on ``W``
  and the sink that achieves it.

The optimal network is read back by peeling sinks off ``Z``.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..core.config import settings
from ..core.errors import ArgumentError, InternalError
from ..models.dataset import Dataset
from ..models.graph import Dag, NodeSubset
from ..schemas.params import BdeuParams, GreedyParams
from ..utils.subsets import drop_bit, popcount_table, to_global, to_local
from .scoring import BdeuScorer, LocalScoreTable, build_score_table

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BestParentsRow:
    """Best parent sets of ``node`` for every candidate subset of ``others``.

    Arrays are indexed by masks over positions in ``others`` (ascending node
    indices); ``parents`` holds masks in the same positional encoding.
    """

    node: int
    others: Tuple[int, ...]
    scores: np.ndarray
    parents: np.ndarray

    def best(self, candidates: NodeSubset) -> Tuple[NodeSubset, float]:
        if not candidates.issubset(NodeSubset.of(self.others)):
            raise ArgumentError(f"candidates {candidates} outside {list(self.others)}")
        local = to_local(candidates.mask, self.others)
        return NodeSubset(to_global(int(self.parents[local]), self.others)), float(self.scores[local])


@dataclass(frozen=True)
class SinkTable:
    nodes: Tuple[int, ...]
    scores: np.ndarray
    sinks: np.ndarray

    def best_score(self) -> float:
        return float(self.scores[-1])


@dataclass(frozen=True)
class NetworkResult:
    """Outcome of an optimal-network call: the DAG lives on the dataset's node set, arcs within ``nodes``."""

    dag: Dag
    nodes: NodeSubset
    score: float
    inexact: bool = False


def build_best_parents(v: int, nodes: NodeSubset, table: LocalScoreTable) -> BestParentsRow:
    others = tuple(u for u in nodes if u != v)
    width = len(others)
    size = 1 << width
    k = table.max_indegree

    scores = np.full(size, -np.inf)
    cardinality = popcount_table(width)
    covered = np.zeros(size, dtype=bool)
    for parents, score in table:
        if parents.issubset(NodeSubset.of(others)):
            local = to_local(parents.mask, others)
            scores[local] = score
            covered[local] = True
    if not covered[cardinality <= k].all():
        raise InternalError(f"score table of node {v} does not cover every parent set of size <= {k}")

    best = np.arange(size, dtype=np.int64)
    index = np.arange(size, dtype=np.int64)
    for bit in range(width):
        target = index[(index >> bit) & 1 == 1]
        source = target ^ (1 << bit)
        s_src, s_dst = scores[source], scores[target]
        c_src, c_dst = cardinality[best[source]], cardinality[best[target]]
        b_src, b_dst = best[source], best[target]
        better = (s_src > s_dst) | (
            (s_src == s_dst) & ((c_src < c_dst) | ((c_src == c_dst) & (b_src < b_dst)))
        )
        scores[target[better]] = s_src[better]
        best[target[better]] = b_src[better]

    return BestParentsRow(v, others, scores, best)


def build_sink_table(nodes: Sequence[int], rows: Dict[int, BestParentsRow]) -> SinkTable:
    p = len(nodes)
    size = 1 << p
    scores = np.full(size, -np.inf)
    scores[0] = 0.0
    sinks = np.full(size, -1, dtype=np.int8)

    order = np.argsort(popcount_table(p), kind="stable").astype(np.int64)
    layer_sizes = [1]
    for width in range(1, p + 1):
        layer_sizes.append(layer_sizes[-1] * (p - width + 1) // width)
    start = 1
    for width in range(1, p + 1):
        layer = order[start:start + layer_sizes[width]]
        start += layer_sizes[width]
        best = np.full(layer.size, -np.inf)
        best_sink = np.full(layer.size, -1, dtype=np.int8)
        for s in range(p):
            has = ((layer >> s) & 1) == 1
            previous = layer[has] ^ (1 << s)
            candidate = scores[previous] + rows[nodes[s]].scores[drop_bit(previous, s)]
            improved = candidate > best[has]
            positions = np.flatnonzero(has)[improved]
            best[positions] = candidate[improved]
            best_sink[positions] = s
        scores[layer] = best
        sinks[layer] = best_sink
    return SinkTable(tuple(nodes), scores, sinks)


def reconstruct_dag(sinks: SinkTable, best: Dict[int, BestParentsRow], nodes: NodeSubset, n: Optional[int] = None) -> Dag:
    order = list(nodes)
    if tuple(order) != sinks.nodes:
        raise ArgumentError("sink table was built for a different node set")
    n = n if n is not None else (order[-1] + 1 if order else 0)
    masks = [0] * n
    remaining = (1 << len(order)) - 1
    while remaining:
        s = int(sinks.sinks[remaining])
        previous = remaining ^ (1 << s)
        row = best[order[s]]
        local_parents = int(row.parents[int(drop_bit(np.int64(previous), s))])
        masks[order[s]] = to_global(local_parents, row.others)
        remaining = previous
    return Dag.from_parent_masks(masks)


def optimal_network(
    nodes: NodeSubset,
    data: Dataset,
    params: Optional[BdeuParams] = None,
    max_indegree: int = 5,
    exact_limit: int = 20,
    scorer: Optional[BdeuScorer] = None,
    fallback: Optional[GreedyParams] = None,
) -> NetworkResult:
    """Highest-scoring DAG on ``nodes`` with in-degree at most ``max_indegree``.

    Node sets larger than ``exact_limit`` (or the hard cap of the exact
    path) are handed to TABU hill-climbing and the result is marked inexact.
    """
    if not nodes:
        raise ArgumentError("optimal_network needs a nonempty node set")
    if exact_limit < 1:
        raise ArgumentError("exact_limit must be at least 1")
    if not nodes.issubset(NodeSubset.full(data.n)):
        raise ArgumentError(f"node set {nodes} outside the dataset's {data.n} variables")
    scorer = scorer or BdeuScorer(data, params)

    order = list(nodes)
    if len(order) > min(exact_limit, settings.exact_hard_cap):
        from .greedy import greedy_search

        logger.warning(
            "node set of size %d exceeds the exact limit %d; using TABU hill-climbing",
            len(order), min(exact_limit, settings.exact_hard_cap),
        )
        greedy = (fallback or GreedyParams()).model_copy(update={"max_indegree": max_indegree})
        dag = greedy_search(data, greedy, None, scorer.params, nodes=nodes, scorer=scorer)
        return NetworkResult(dag, nodes, scorer.score_parents(dag.parent_masks()), inexact=True)

    rows: Dict[int, BestParentsRow] = {}
    for v in order:
        table = build_score_table(v, nodes.remove(v), data, scorer.params, max_indegree, scorer=scorer)
        rows[v] = build_best_parents(v, nodes, table)
    sinks = build_sink_table(order, rows)
    dag = reconstruct_dag(sinks, rows, nodes, data.n)
    logger.debug("optimal network on %s: score %.6f", order, sinks.best_score())
    return NetworkResult(dag, nodes, sinks.best_score())
