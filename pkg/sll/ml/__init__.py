from .construction import learn_global, sll_plus_c, sll_plus_g
from .equivalence import OrientationState, dag_to_cpdag, extend_pdag, meek_orient, pdag_extend_to_dag
from .evaluation import normalized_score, shd, slhd
from .exact import NetworkResult, optimal_network
from .greedy import EdgeConstraint, greedy_search
from .local import (
    BlanketResult,
    LocalLearner,
    SllCache,
    all_blankets,
    find_neighbors,
    find_potential_neighbors,
    find_potential_spouses,
    find_spouses,
    markov_blanket,
)
from .sampling import forward_sample, random_dag
from .scoring import BdeuScorer, bdeu_local_score, build_score_table, score_dag

__all__ = [
    "BdeuScorer",
    "BlanketResult",
    "EdgeConstraint",
    "LocalLearner",
    "NetworkResult",
    "OrientationState",
    "SllCache",
    "all_blankets",
    "bdeu_local_score",
    "build_score_table",
    "dag_to_cpdag",
    "extend_pdag",
    "find_neighbors",
    "find_potential_neighbors",
    "find_potential_spouses",
    "find_spouses",
    "forward_sample",
    "greedy_search",
    "learn_global",
    "markov_blanket",
    "meek_orient",
    "normalized_score",
    "optimal_network",
    "pdag_extend_to_dag",
    "random_dag",
    "score_dag",
    "shd",
    "sll_plus_c",
    "sll_plus_g",
    "slhd",
]
