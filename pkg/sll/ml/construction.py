"""Global DAGs assembled from local learning results.

``sll_plus_c`` builds an AND-rule skeleton, orients the v-structures found
by the spouse phase and closes the rest with the Meek rules. ``sll_plus_g``
only learns an OR-rule skeleton and hands it to TABU hill-climbing as an
edge constraint.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Set

from ..core.errors import ArgumentError
from ..models.dataset import Dataset
from ..models.graph import Dag, Edge, NodeSubset
from ..schemas.params import GreedyParams, SllConfig
from .equivalence import OrientationState, meek_orient
from .greedy import EdgeConstraint, greedy_search
from .local import LocalLearner

logger = logging.getLogger(__name__)

METHODS = ("sll-c", "sll-g", "greedy")


@dataclass(frozen=True)
class GlobalResult:
    dag: Dag
    inexact: bool = False
    optimal_network_calls: int = 0


def _fan_out(fn: Callable[[int], object], targets: List[int], threads: Optional[int]) -> list:
    if threads == 1 or len(targets) <= 1:
        return [fn(t) for t in targets]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, targets))


def potential_neighbor_sets(learner: LocalLearner, threads: Optional[int] = 1) -> Dict[int, NodeSubset]:
    targets = list(range(learner.data.n))
    return dict(zip(targets, _fan_out(learner.potential_neighbors, targets, threads)))


def and_skeleton(potential: Dict[int, NodeSubset]) -> Set[Edge]:
    return {(u, v) for u, found in potential.items() for v in found if u < v and u in potential[v]}


def or_skeleton(potential: Dict[int, NodeSubset]) -> Set[Edge]:
    return {(min(u, v), max(u, v)) for u, found in potential.items() for v in found}


def _commit_collider(state: OrientationState, v: int, u: int, w: int) -> bool:
    """Orient ``v -> w <- u`` when both arcs fit; otherwise leave ``state`` untouched."""
    trial = state.copy()
    for parent in (v, u):
        if trial.has_arc(parent, w):
            continue
        if not trial.orient(parent, w):
            return False
    state.parents, state.children, state.undirected = trial.parents, trial.children, trial.undirected
    state.committed.append((min(v, u), w, max(v, u)))
    return True


def orient_leftovers(state: OrientationState) -> OrientationState:
    """Direct remaining undirected edges one at a time, re-closing under Meek after each."""
    state = meek_orient(state)
    while True:
        edges = state.undirected_edges()
        if not edges:
            return state
        a, b = edges[0]
        if state.can_orient(a, b) and not state.creates_v_structure(a, b):
            state.orient(a, b)
        elif state.can_orient(b, a) and not state.creates_v_structure(b, a):
            state.orient(b, a)
        elif not state.orient(a, b):
            state.orient(b, a)
        state = meek_orient(state)


def _sll_plus_c(data: Dataset, config: SllConfig, threads: Optional[int]) -> GlobalResult:
    learner = LocalLearner(data, config)
    potential = potential_neighbor_sets(learner, threads)
    edges = and_skeleton(potential)
    logger.info("AND skeleton has %d edges", len(edges))

    targets = list(range(data.n))
    found = dict(zip(targets, _fan_out(learner.potential_spouses_with_witnesses, targets, threads)))

    state = OrientationState(data.n, undirected=edges)
    skipped = 0
    for v in targets:
        spouse_set, witnesses = found[v]
        for u in spouse_set:
            if state.adjacent(v, u):
                continue
            common = witnesses.get(u, NodeSubset()).mask & state.adjacency(v) & state.adjacency(u)
            for w in NodeSubset(common):
                if not _commit_collider(state, v, u, w):
                    skipped += 1
    if skipped:
        logger.info("skipped %d conflicting v-structure orientations", skipped)

    state = orient_leftovers(state)
    dag = Dag(data.n, state.directed_arcs())
    return GlobalResult(dag, bool(learner.cache.inexact), learner.cache.optimal_network_calls)


def _sll_plus_g(
    data: Dataset, config: SllConfig, greedy: GreedyParams, threads: Optional[int]
) -> GlobalResult:
    learner = LocalLearner(data, config)
    edges = or_skeleton(potential_neighbor_sets(learner, threads))
    logger.info("OR skeleton has %d edges", len(edges))
    dag = greedy_search(
        data, greedy, EdgeConstraint.from_edges(edges), config.scoring, scorer=learner.scorer
    )
    return GlobalResult(dag, bool(learner.cache.inexact), learner.cache.optimal_network_calls)


def sll_plus_c(data: Dataset, config: Optional[SllConfig] = None, threads: Optional[int] = 1) -> Dag:
    return _sll_plus_c(data, config or SllConfig(), threads).dag


def sll_plus_g(
    data: Dataset,
    config: Optional[SllConfig] = None,
    greedy: Optional[GreedyParams] = None,
    threads: Optional[int] = 1,
) -> Dag:
    return _sll_plus_g(data, config or SllConfig(), greedy or GreedyParams(), threads).dag


def learn_global(
    data: Dataset,
    method: str,
    config: Optional[SllConfig] = None,
    greedy: Optional[GreedyParams] = None,
    threads: Optional[int] = 1,
) -> GlobalResult:
    config = config or SllConfig()
    greedy = greedy or GreedyParams()
    if method == "sll-c":
        return _sll_plus_c(data, config, threads)
    if method == "sll-g":
        return _sll_plus_g(data, config, greedy, threads)
    if method == "greedy":
        return GlobalResult(greedy_search(data, greedy, scoring=config.scoring))
    raise ArgumentError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
