"""Score-based local learning of neighbor sets, spouse sets and Markov blankets.

Neighbors of a target are found by growing a candidate set one node at a
time and keeping whatever the optimal network on ``{t, v} + H`` makes
adjacent to the target; a symmetry (AND) check then removes nodes that do
not nominate the target back. Spouses are found the same way among the
neighbors of neighbors, followed by an OR check over the other nodes.

Potential neighbor and potential spouse sets are pure functions of
``(data, config, node)`` and are cached across targets.
"""

import logging
import numbers
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from ..core.errors import ArgumentError
from ..models.dataset import Dataset
from ..models.graph import NodeSubset, common_children, neighbors, spouses
from ..schemas.params import SllConfig, VisitOrder
from .exact import NetworkResult, optimal_network
from .scoring import BdeuScorer

logger = logging.getLogger(__name__)

Trail = Set[Tuple[str, int]]


@dataclass
class SllCache:
    """Potential neighbor/spouse sets shared by all targets of one run.

    Inserts are serialized and keep the first stored value; a stored entry is
    never recomputed.
    """

    potential_neighbors: Dict[int, NodeSubset] = field(default_factory=dict)
    potential_spouses: Dict[int, NodeSubset] = field(default_factory=dict)
    spouse_witnesses: Dict[int, Dict[int, NodeSubset]] = field(default_factory=dict)
    inexact: Set[Tuple[str, int]] = field(default_factory=set)
    optimal_network_calls: int = 0
    scorer: Optional[BdeuScorer] = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def count_call(self) -> None:
        with self._lock:
            self.optimal_network_calls += 1

    def store(self, table: Dict, key: int, value, kind: str, inexact: bool):
        with self._lock:
            if inexact:
                self.inexact.add((kind, key))
            return table.setdefault(key, value)

    def store_witnesses(self, key: int, witnesses: Dict[int, NodeSubset]) -> Dict[int, NodeSubset]:
        with self._lock:
            return self.spouse_witnesses.setdefault(key, witnesses)

    def is_inexact(self, trail: Trail) -> bool:
        return bool(trail & self.inexact)


@dataclass(frozen=True)
class BlanketResult:
    target: int
    neighbors: NodeSubset
    spouses: NodeSubset
    inexact: bool = False

    @property
    def blanket(self) -> NodeSubset:
        return self.neighbors | self.spouses


class LocalLearner:
    def __init__(
        self,
        data: Dataset,
        config: Optional[SllConfig] = None,
        cache: Optional[SllCache] = None,
    ):
        self.data = data
        self.config = config or SllConfig()
        self.cache = cache if cache is not None else SllCache()
        if self.cache.scorer is None or self.cache.scorer.data is not data:
            self.cache.scorer = BdeuScorer(data, self.config.scoring)
        self.scorer = self.cache.scorer
        self.all_nodes = NodeSubset.full(data.n)

    def _check_target(self, t: int) -> int:
        if isinstance(t, bool) or not isinstance(t, numbers.Integral) or not 0 <= t < self.data.n:
            raise ArgumentError(f"invalid target {t!r} for a dataset with {self.data.n} variables")
        return int(t)

    def _visit(self, candidates: NodeSubset) -> List[int]:
        if self.config.visit_order == VisitOrder.DATA_ORDER:
            return [c for c in self.data.column_order if c in candidates]
        return candidates.to_list()

    def _optimal(self, nodes: NodeSubset) -> NetworkResult:
        self.cache.count_call()
        return optimal_network(
            nodes,
            self.data,
            self.config.scoring,
            max_indegree=self.config.max_indegree,
            exact_limit=self.config.exact_limit,
            scorer=self.scorer,
        )

    def potential_neighbors(self, t: int, trail: Optional[Trail] = None) -> NodeSubset:
        t = self._check_target(t)
        if trail is not None:
            trail.add(("neighbors", t))
        cached = self.cache.potential_neighbors.get(t)
        if cached is not None:
            return cached

        target = NodeSubset.of([t])
        current = NodeSubset()
        inexact = False
        for v in self._visit(self.all_nodes.remove(t)):
            result = self._optimal(target.add(v) | current)
            inexact |= result.inexact
            current = neighbors(result.dag, t)
        logger.debug("potential neighbors of %d: %s", t, current.to_list())
        return self.cache.store(self.cache.potential_neighbors, t, current, "neighbors", inexact)

    def neighbors(self, t: int, trail: Optional[Trail] = None) -> NodeSubset:
        kept = self.potential_neighbors(t, trail)
        for v in kept.to_list():
            if t not in self.potential_neighbors(v, trail):
                kept = kept.remove(v)
        return kept

    def _known_neighbors(self, t: int) -> Optional[NodeSubset]:
        """Neighbors of ``t`` from cached potential sets only; ``None`` when any is missing."""
        kept = self.cache.potential_neighbors.get(t)
        if kept is None:
            return None
        for v in kept.to_list():
            nominated = self.cache.potential_neighbors.get(v)
            if nominated is None:
                return None
            if t not in nominated:
                kept = kept.remove(v)
        return kept

    def potential_spouses(
        self, t: int, h_star: Optional[NodeSubset] = None, trail: Optional[Trail] = None
    ) -> NodeSubset:
        return self.potential_spouses_with_witnesses(t, h_star, trail)[0]

    def potential_spouses_with_witnesses(
        self, t: int, h_star: Optional[NodeSubset] = None, trail: Optional[Trail] = None
    ) -> Tuple[NodeSubset, Dict[int, NodeSubset]]:
        """Potential spouses of ``t`` and, per spouse, its common children with ``t`` in the last local DAG."""
        t = self._check_target(t)
        if h_star is None:
            h_star = self.neighbors(t, trail)
            cacheable = True
        else:
            if t in h_star:
                raise ArgumentError(f"target {t} cannot be among its own neighbors")
            cacheable = h_star == self._known_neighbors(t)
        if trail is not None and cacheable:
            trail.add(("spouses", t))
        if cacheable and t in self.cache.potential_spouses:
            return self.cache.potential_spouses[t], self.cache.spouse_witnesses.get(t, {})

        second_ring = NodeSubset()
        for u in h_star:
            second_ring = second_ring | self.neighbors(u, trail)
        pool = second_ring - h_star - NodeSubset.of([t])

        base = h_star.add(t)
        current = NodeSubset()
        witnesses: Dict[int, NodeSubset] = {}
        inexact = False
        for v in self._visit(pool):
            result = self._optimal(base.add(v) | current)
            inexact |= result.inexact
            current = spouses(result.dag, t)
            witnesses = {s: common_children(result.dag, t, s) for s in current}
        logger.debug("potential spouses of %d: %s", t, current.to_list())

        if not cacheable:
            return current, witnesses
        witnesses = self.cache.store_witnesses(t, witnesses)
        stored = self.cache.store(self.cache.potential_spouses, t, current, "spouses", inexact)
        return stored, witnesses

    def spouses(self, t: int, trail: Optional[Trail] = None) -> NodeSubset:
        h_star = self.neighbors(t, trail)
        found = self.potential_spouses(t, trail=trail)
        for v in (self.all_nodes - h_star.add(t)).to_list():
            if t in self.potential_spouses(v, trail=trail):
                found = found.add(v)
        return found

    def markov_blanket(self, t: int) -> BlanketResult:
        t = self._check_target(t)
        trail: Trail = set()
        found_neighbors = self.neighbors(t, trail)
        found_spouses = self.spouses(t, trail)
        return BlanketResult(t, found_neighbors, found_spouses, self.cache.is_inexact(trail))

    def all_blankets(self, threads: Optional[int] = 1) -> Dict[int, BlanketResult]:
        targets = list(range(self.data.n))
        if threads == 1 or len(targets) <= 1:
            results = [self.markov_blanket(t) for t in targets]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(self.markov_blanket, targets))
        logger.info(
            "blankets for %d targets used %d optimal-network calls",
            len(targets), self.cache.optimal_network_calls,
        )
        return {result.target: result for result in results}


def find_potential_neighbors(data: Dataset, t: int, config: Optional[SllConfig] = None) -> NodeSubset:
    return LocalLearner(data, config).potential_neighbors(t)


def find_neighbors(
    data: Dataset, t: int, config: Optional[SllConfig] = None, cache: Optional[SllCache] = None
) -> NodeSubset:
    return LocalLearner(data, config, cache).neighbors(t)


def find_potential_spouses(
    data: Dataset,
    t: int,
    h_star: NodeSubset,
    config: Optional[SllConfig] = None,
    cache: Optional[SllCache] = None,
) -> NodeSubset:
    return LocalLearner(data, config, cache).potential_spouses(t, h_star)


def find_spouses(
    data: Dataset, t: int, config: Optional[SllConfig] = None, cache: Optional[SllCache] = None
) -> NodeSubset:
    return LocalLearner(data, config, cache).spouses(t)


def markov_blanket(
    data: Dataset, t: int, config: Optional[SllConfig] = None, cache: Optional[SllCache] = None
) -> NodeSubset:
    return LocalLearner(data, config, cache).markov_blanket(t).blanket


def all_blankets(
    data: Dataset, config: Optional[SllConfig] = None, threads: Optional[int] = 1
) -> Dict[int, BlanketResult]:
    return LocalLearner(data, config).all_blankets(threads)
