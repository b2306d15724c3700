"""Steepest-ascent hill-climbing over DAGs with a TABU list.

Each step scores every legal single-arc addition, deletion and reversal,
applies the best one that does not lead back to a recently visited
structure (even when it lowers the score), and remembers the best structure
seen. The climb stops after ``patience`` steps without a new best.
"""

import hashlib
import logging
import math
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

from ..core.config import settings
from ..core.errors import ArgumentError, InternalError
from ..models.dataset import Dataset
from ..models.graph import Dag, Edge, NodeSubset
from ..schemas.params import BdeuParams, GreedyParams
from ..utils.subsets import bits, popcount
from .scoring import BdeuScorer, bdeu_local_score

logger = logging.getLogger(__name__)

ADD, DELETE, REVERSE = 0, 1, 2


@lru_cache(maxsize=None)
def _arc_hash(u: int, v: int) -> int:
    digest = hashlib.blake2b(f"{u}->{v}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def structure_fingerprint(dag: Dag) -> int:
    """64-bit XOR of per-arc hashes; equal arc sets give equal fingerprints."""
    fingerprint = 0
    for u, v in dag.arcs:
        fingerprint ^= _arc_hash(u, v)
    return fingerprint


@dataclass(frozen=True)
class EdgeConstraint:
    """Unordered pairs an arc may be added on; ``allowed=None`` means unconstrained."""

    allowed: Optional[FrozenSet[Edge]] = None

    @classmethod
    def unconstrained(cls) -> "EdgeConstraint":
        return cls(None)

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[int, int]]) -> "EdgeConstraint":
        pairs = set()
        for u, v in edges:
            if u == v:
                raise ArgumentError(f"self-edge ({u}, {v}) in constraint")
            pairs.add((min(u, v), max(u, v)))
        return cls(frozenset(pairs))

    def permits(self, u: int, v: int) -> bool:
        return self.allowed is None or (min(u, v), max(u, v)) in self.allowed


class TabuHillClimber:
    def __init__(
        self,
        scorer: BdeuScorer,
        params: GreedyParams,
        constraint: Optional[EdgeConstraint] = None,
        nodes: Optional[NodeSubset] = None,
    ):
        self.scorer = scorer
        self.params = params
        self.constraint = constraint or EdgeConstraint.unconstrained()
        self.n = scorer.data.n
        self.nodes = bits(nodes.mask) if nodes is not None else list(range(self.n))
        self.verify = settings.verify_deltas or logger.isEnabledFor(logging.DEBUG)
        if self.constraint.allowed is not None:
            for u, v in self.constraint.allowed:
                if not (0 <= u < self.n and 0 <= v < self.n):
                    raise ArgumentError(f"constraint edge ({u}, {v}) outside the node set")

        self.parents = [0] * self.n
        self.local = [scorer.local_score(v, 0) for v in range(self.n)]
        self.fingerprint = 0
        self.moves = 0

    @property
    def score(self) -> float:
        return sum(self.local)

    def _descendants(self) -> List[int]:
        children = [0] * self.n
        for v in self.nodes:
            for u in bits(self.parents[v]):
                children[u] |= 1 << v
        reach = [0] * self.n
        for x in self.nodes:
            seen = 0
            frontier = children[x]
            while frontier:
                seen |= frontier
                nxt = 0
                for node in bits(frontier):
                    nxt |= children[node]
                frontier = nxt & ~seen
            reach[x] = seen
        return reach

    def _candidates(self, tabu) -> Optional[Tuple[float, int, int, int, int]]:
        """Best non-TABU move as ``(delta, kind, u, v, fingerprint)``."""
        k = self.params.max_indegree
        local = self.local
        reach = self._descendants()
        best = None

        def consider(delta, kind, u, v, fingerprint):
            nonlocal best
            if fingerprint in tabu:
                return
            if best is None or delta > best[0]:
                best = (delta, kind, u, v, fingerprint)

        for u in self.nodes:
            for v in self.nodes:
                if u == v or self.parents[v] >> u & 1 or self.parents[u] >> v & 1:
                    continue
                if popcount(self.parents[v]) >= k or not self.constraint.permits(u, v):
                    continue
                if reach[v] >> u & 1:
                    continue
                delta = self.scorer.local_score(v, self.parents[v] | 1 << u) - local[v]
                consider(delta, ADD, u, v, self.fingerprint ^ _arc_hash(u, v))

        arcs = [(u, v) for v in self.nodes for u in bits(self.parents[v])]
        arcs.sort()
        for u, v in arcs:
            delta = self.scorer.local_score(v, self.parents[v] & ~(1 << u)) - local[v]
            consider(delta, DELETE, u, v, self.fingerprint ^ _arc_hash(u, v))

        for u, v in arcs:
            if popcount(self.parents[u]) >= k:
                continue
            other_path = any(
                reach[c] >> v & 1 for c in self._children_of(u) if c != v
            )
            if other_path:
                continue
            delta = (
                self.scorer.local_score(v, self.parents[v] & ~(1 << u)) - local[v]
                + self.scorer.local_score(u, self.parents[u] | 1 << v) - local[u]
            )
            consider(delta, REVERSE, u, v, self.fingerprint ^ _arc_hash(u, v) ^ _arc_hash(v, u))
        return best

    def _children_of(self, u: int) -> List[int]:
        return [v for v in self.nodes if self.parents[v] >> u & 1]

    def _apply(self, kind: int, u: int, v: int, fingerprint: int) -> None:
        if kind == ADD:
            self.parents[v] |= 1 << u
        elif kind == DELETE:
            self.parents[v] &= ~(1 << u)
        else:
            self.parents[v] &= ~(1 << u)
            self.parents[u] |= 1 << v
            self.local[u] = self.scorer.local_score(u, self.parents[u])
        self.local[v] = self.scorer.local_score(v, self.parents[v])
        self.fingerprint = fingerprint
        self.moves += 1
        if self.verify:
            self._check_total()

    def _check_total(self) -> None:
        data, params = self.scorer.data, self.scorer.params
        full = sum(
            bdeu_local_score(v, NodeSubset(mask), data, params) for v, mask in enumerate(self.parents)
        )
        if not math.isclose(full, self.score, rel_tol=1e-9, abs_tol=1e-9):
            raise InternalError(f"delta bookkeeping drifted: {self.score} vs full rescoring {full}")

    def climb(self, tabu: deque) -> Tuple[float, List[int]]:
        best_score = self.score
        best_parents = list(self.parents)
        stale = 0
        while stale < self.params.patience:
            move = self._candidates(tabu)
            if move is None:
                break
            delta, kind, u, v, fingerprint = move
            self._apply(kind, u, v, fingerprint)
            tabu.append(fingerprint)
            logger.debug("move %d: %s %d->%d delta %.6f", self.moves, ("add", "delete", "reverse")[kind], u, v, delta)
            if self.score > best_score:
                best_score = self.score
                best_parents = list(self.parents)
                stale = 0
            else:
                stale += 1
        return best_score, best_parents

    def reset_to(self, parent_masks: List[int]) -> None:
        self.parents = list(parent_masks)
        self.local = [self.scorer.local_score(v, mask) for v, mask in enumerate(self.parents)]
        self.fingerprint = 0
        for v, mask in enumerate(self.parents):
            for u in bits(mask):
                self.fingerprint ^= _arc_hash(u, v)

    def perturb(self, rng: np.random.Generator, steps: int) -> None:
        for _ in range(steps):
            moves = self._legal_moves()
            if not moves:
                return
            kind, u, v, fingerprint = moves[int(rng.integers(len(moves)))]
            self._apply(kind, u, v, fingerprint)

    def _legal_moves(self) -> List[Tuple[int, int, int, int]]:
        everything = []
        k = self.params.max_indegree
        reach = self._descendants()
        for u in self.nodes:
            for v in self.nodes:
                if u == v or self.parents[v] >> u & 1 or self.parents[u] >> v & 1:
                    continue
                if popcount(self.parents[v]) < k and self.constraint.permits(u, v) and not reach[v] >> u & 1:
                    everything.append((ADD, u, v, self.fingerprint ^ _arc_hash(u, v)))
        for v in self.nodes:
            for u in bits(self.parents[v]):
                everything.append((DELETE, u, v, self.fingerprint ^ _arc_hash(u, v)))
        return everything


def greedy_search(
    data: Dataset,
    params: Optional[GreedyParams] = None,
    constraint: Optional[EdgeConstraint] = None,
    scoring: Optional[BdeuParams] = None,
    nodes: Optional[NodeSubset] = None,
    scorer: Optional[BdeuScorer] = None,
) -> Dag:
    """TABU hill-climbing from the empty DAG; returns the best structure visited."""
    params = params or GreedyParams()
    scorer = scorer or BdeuScorer(data, scoring)
    climber = TabuHillClimber(scorer, params, constraint, nodes)

    tabu: deque = deque([climber.fingerprint], maxlen=params.tabu_capacity)
    best_score, best_parents = climber.climb(tabu)

    if params.restarts:
        rng = np.random.default_rng(params.seed)
        for restart in range(params.restarts):
            climber.reset_to(best_parents)
            climber.perturb(rng, params.perturbation)
            score, parents = climber.climb(tabu)
            logger.debug("restart %d reached %.6f (best %.6f)", restart, score, best_score)
            if score > best_score:
                best_score, best_parents = score, parents

    logger.info("greedy search finished after %d moves with score %.6f", climber.moves, best_score)
    return Dag.from_parent_masks(best_parents)
