"""Structure-recovery metrics: SLHD, SHD and normalized BDeu score."""

from typing import Dict, Mapping, Optional

from ..core.errors import ArgumentError
from ..models.dataset import Dataset
from ..models.graph import Dag, NodeSubset, Pdag, neighbors, true_markov_blanket
from ..schemas.params import BdeuParams
from .equivalence import dag_to_cpdag, pdag_extend_to_dag
from .scoring import BdeuScorer


def slhd(learned: Mapping[int, NodeSubset], truth: Mapping[int, NodeSubset]) -> int:
    """Sum over targets of ``|learned(t) ^ truth(t)|``."""
    if set(learned) != set(truth):
        raise ArgumentError("learned and true local sets cover different targets")
    return sum(len(learned[t] ^ truth[t]) for t in truth)


def shd(p1: Pdag, p2: Pdag) -> int:
    """Missing, extra and wrongly typed edges between two PDAGs, one per unordered pair."""
    if p1.n != p2.n:
        raise ArgumentError(f"PDAGs on {p1.n} and {p2.n} nodes cannot be compared")
    distance = 0
    for u, v in p1.skeleton() | p2.skeleton():
        if p1.edge_type(u, v) != p2.edge_type(u, v):
            distance += 1
    return distance


def neighbor_sets(dag: Dag) -> Dict[int, NodeSubset]:
    return {v: neighbors(dag, v) for v in range(dag.n)}


def blanket_sets(dag: Dag) -> Dict[int, NodeSubset]:
    return {v: true_markov_blanket(dag, v) for v in range(dag.n)}


def normalized_score(
    learned: Pdag,
    truth: Dag,
    data: Dataset,
    params: Optional[BdeuParams] = None,
    scorer: Optional[BdeuScorer] = None,
) -> float:
    """BDeu of an extension of ``learned`` divided by the BDeu of ``truth``; 1.0 is the truth, lower is better."""
    if data.m == 0:
        raise ArgumentError("normalized score needs at least one row of data")
    if learned.n != truth.n:
        raise ArgumentError(f"learned PDAG has {learned.n} nodes, truth has {truth.n}")
    scorer = scorer or BdeuScorer(data, params)
    reference = scorer.score_dag(truth)
    if reference == 0.0:
        raise ArgumentError("true structure scores exactly zero")
    return scorer.score_dag(pdag_extend_to_dag(learned)) / reference


def compare_structures(
    learned: Dag, truth: Dag, data: Dataset, params: Optional[BdeuParams] = None
) -> Dict[str, float]:
    """All metrics of a learned DAG against the true one, keyed as in the evaluate report."""
    return {
        "shd": shd(dag_to_cpdag(learned), dag_to_cpdag(truth)),
        "normalized_score": normalized_score(dag_to_cpdag(learned), truth, data, params),
        "slhd_neighbors": slhd(neighbor_sets(learned), neighbor_sets(truth)),
        "slhd_blankets": slhd(blanket_sets(learned), blanket_sets(truth)),
    }
