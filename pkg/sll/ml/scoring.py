"""BDeu local scores, total DAG scores and bounded-in-degree score tables.

With ``q`` parent configurations, child arity ``r``, ``a_j = ess / q`` and
``a_jk = ess / (q r)``, the local score of a family is

    sum_j [lnG(a_j) - lnG(a_j + N_j)] + sum_jk [lnG(a_jk + N_jk) - lnG(a_jk)]

in nats. Configurations that never occur contribute zero and are skipped.
"""

import logging
import threading
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from scipy.special import gammaln

from ..core.errors import ArgumentError
from ..models.dataset import Dataset
from ..models.graph import Dag, NodeSubset
from ..models.network import parent_config_index
from ..schemas.params import BdeuParams
from ..utils.subsets import bits, iter_subsets

logger = logging.getLogger(__name__)

# Above this many cells the contingency table is built by sorting instead of bincount.
_DENSE_CELLS = 1 << 20
_INT64_SAFE = 1 << 62


def family_counts(data: Dataset, v: int, parent_list: List[int]) -> Tuple[np.ndarray, np.ndarray, float]:
    """Non-zero counts ``N_jk`` and ``N_j`` of the family ``(v, parents)`` plus ``q``."""
    child = data.values[:, v]
    r = data.arity(v)
    arities = [data.arity(p) for p in parent_list]
    q = 1
    for arity in arities:
        q *= arity

    if data.m == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, float(q)

    if q * r <= _INT64_SAFE:
        config = parent_config_index(data.values[:, parent_list], arities)
        cell = config * r + child
        if q * r <= max(_DENSE_CELLS, 4 * data.m):
            n_jk = np.bincount(cell, minlength=q * r)
            n_j = n_jk.reshape(q, r).sum(axis=1)
            return n_jk[n_jk > 0], n_j[n_j > 0], float(q)
        _, n_jk = np.unique(cell, return_counts=True)
        _, n_j = np.unique(config, return_counts=True)
        return n_jk, n_j, float(q)

    family = data.values[:, parent_list + [v]]
    _, n_jk = np.unique(family, axis=0, return_counts=True)
    _, n_j = np.unique(family[:, :-1], axis=0, return_counts=True)
    return n_jk, n_j, float(q)


def bdeu_from_counts(n_jk: np.ndarray, n_j: np.ndarray, q: float, r: int, ess: float) -> float:
    if n_jk.size == 0:
        return 0.0
    a_j = ess / q
    a_jk = ess / (q * r)
    score = n_j.size * gammaln(a_j) - gammaln(a_j + n_j).sum()
    score += gammaln(a_jk + n_jk).sum() - n_jk.size * gammaln(a_jk)
    return float(score)


def _check_family(data: Dataset, v: int, parents: NodeSubset) -> List[int]:
    if not 0 <= v < data.n:
        raise ArgumentError(f"invalid node {v!r} for a dataset with {data.n} variables")
    if v in parents:
        raise ArgumentError(f"node {v} cannot be its own parent")
    parent_list = parents.to_list()
    if parent_list and parent_list[-1] >= data.n:
        raise ArgumentError(f"parent set {parent_list} outside the dataset's variables")
    return parent_list


def bdeu_local_score(v: int, parents: NodeSubset, data: Dataset, params: Optional[BdeuParams] = None) -> float:
    params = params or BdeuParams()
    parent_list = _check_family(data, v, parents)
    n_jk, n_j, q = family_counts(data, v, parent_list)
    return bdeu_from_counts(n_jk, n_j, q, data.arity(v), params.ess)


def score_dag(dag: Dag, data: Dataset, params: Optional[BdeuParams] = None) -> float:
    if dag.n != data.n:
        raise ArgumentError(f"DAG has {dag.n} nodes but the dataset has {data.n} variables")
    return BdeuScorer(data, params).score_dag(dag)


class BdeuScorer:
    """Memoised BDeu local scores for one dataset.

    Shared by every search engine working on the same data. Reads are
    lock-free; inserts go through a lock and keep the first stored value, so
    concurrent computation of the same family is harmless.
    """

    def __init__(self, data: Dataset, params: Optional[BdeuParams] = None):
        self.data = data
        self.params = params or BdeuParams()
        self._memo: Dict[Tuple[int, int], float] = {}
        self._lock = threading.Lock()
        self.evaluations = 0

    def local_score(self, v: int, parent_mask: int) -> float:
        key = (v, parent_mask)
        score = self._memo.get(key)
        if score is not None:
            return score
        if parent_mask >> v & 1:
            raise ArgumentError(f"node {v} cannot be its own parent")
        n_jk, n_j, q = family_counts(self.data, v, bits(parent_mask))
        score = bdeu_from_counts(n_jk, n_j, q, self.data.arity(v), self.params.ess)
        with self._lock:
            self.evaluations += 1
            return self._memo.setdefault(key, score)

    def score_parents(self, parent_masks) -> float:
        total = 0.0
        for v, mask in enumerate(parent_masks):
            total += self.local_score(v, mask)
        return total

    def score_dag(self, dag: Dag) -> float:
        if dag.n != self.data.n:
            raise ArgumentError(f"DAG has {dag.n} nodes but the dataset has {self.data.n} variables")
        return self.score_parents(dag.parent_masks())

    def __len__(self) -> int:
        return len(self._memo)


@dataclass(frozen=True)
class LocalScoreTable:
    node: int
    candidates: NodeSubset
    max_indegree: int
    entries: Dict[NodeSubset, float] = field(repr=False)

    def score(self, parents: NodeSubset) -> float:
        return self.entries[parents]

    def __contains__(self, parents: NodeSubset) -> bool:
        return parents in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Tuple[NodeSubset, float]]:
        return iter(self.entries.items())

    def rows(self) -> List[Tuple[int, float]]:
        """``(parent bitmask, score)`` pairs sorted by bitmask."""
        return sorted((parents.mask, score) for parents, score in self.entries.items())


def build_score_table(
    v: int,
    candidates: NodeSubset,
    data: Dataset,
    params: Optional[BdeuParams] = None,
    max_indegree: int = 5,
    scorer: Optional[BdeuScorer] = None,
) -> LocalScoreTable:
    if v in candidates:
        raise ArgumentError(f"node {v} cannot be a candidate parent of itself")
    if max_indegree < 0:
        raise ArgumentError("max_indegree must be non-negative")
    _check_family(data, v, candidates)
    scorer = scorer or BdeuScorer(data, params)

    entries: Dict[NodeSubset, float] = {}
    for mask in iter_subsets(candidates.mask, max_indegree):
        entries[NodeSubset(mask)] = scorer.local_score(v, mask)
    logger.debug("score table for node %d: %d parent sets", v, len(entries))
    return LocalScoreTable(v, candidates, max_indegree, entries)
