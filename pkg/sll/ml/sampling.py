"""Ancestral sampling and random ground-truth networks."""

import logging
from typing import List, Optional, Tuple

import numpy as np

from ..core.config import settings
from ..core.errors import ArgumentError
from ..models.dataset import Dataset, Variable
from ..models.graph import Dag
from ..models.network import BayesianNetwork, parent_config_index

logger = logging.getLogger(__name__)

_MAX_ROW_DRAWS = 1000


def forward_sample(bn: BayesianNetwork, m: int, seed: int = 0) -> Dataset:
    """``m`` i.i.d. rows drawn node by node in topological order."""
    if m < 0:
        raise ArgumentError(f"sample size must be non-negative, got {m}")
    rng = np.random.default_rng(seed)
    values = np.zeros((m, bn.n), dtype=np.int64)
    for v in bn.dag.topological_order():
        pars = bn.parents(v)
        rows = parent_config_index(values[:, pars], bn.parent_arities(v))
        cdf = np.cumsum(bn.cpts[v][rows], axis=1)
        draws = rng.random(m)
        picked = (draws[:, None] >= cdf).sum(axis=1)
        values[:, v] = np.minimum(picked, bn.variables[v].arity - 1)
    return Dataset(bn.variables, values)


def _neighbor_rows(row: int, arities: List[int]) -> List[int]:
    """Earlier rows whose parent configuration differs from ``row`` in exactly one digit."""
    earlier = []
    stride = 1
    for arity in reversed(arities):
        digit = (row // stride) % arity
        for other in range(digit):
            earlier.append(row - (digit - other) * stride)
        stride *= arity
    return earlier


def _faithful_cpt(
    rng: np.random.Generator, arities: List[int], r: int, margin: float, name: str
) -> np.ndarray:
    """Dirichlet(1) rows, each redrawn until it differs from every one-parent-change row by ``margin``."""
    q = int(np.prod(arities, dtype=np.int64))
    table = np.empty((q, r))
    relaxed = 0
    for row in range(q):
        earlier = _neighbor_rows(row, arities)
        for _ in range(_MAX_ROW_DRAWS):
            table[row] = rng.dirichlet(np.ones(r))
            if not earlier or np.abs(table[earlier] - table[row]).max(axis=1).min() >= margin:
                break
        else:
            relaxed += 1
    if relaxed:
        logger.warning("CPT of %s: %d rows kept below the faithfulness margin %.3f", name, relaxed, margin)
    return table


def random_dag(
    n: int,
    max_indegree: int = 3,
    arity_range: Tuple[int, int] = (2, 4),
    seed: int = 0,
    margin: Optional[float] = None,
) -> BayesianNetwork:
    """Random network: random node order, uniform parent-set sizes up to ``max_indegree``, margin-faithful CPTs."""
    if n < 1:
        raise ArgumentError(f"a random network needs at least one node, got {n}")
    if max_indegree < 0:
        raise ArgumentError("max_indegree must be non-negative")
    lo, hi = arity_range
    if lo < 2 or hi < lo:
        raise ArgumentError(f"invalid arity range {arity_range}")
    margin = settings.faithfulness_margin if margin is None else margin

    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    arities = rng.integers(lo, hi + 1, size=n)
    variables = [Variable(i, f"X{i}", int(arities[i])) for i in range(n)]

    arcs = []
    for position, node in enumerate(order):
        size = int(rng.integers(0, min(max_indegree, position) + 1))
        for parent in rng.choice(order[:position], size=size, replace=False):
            arcs.append((int(parent), int(node)))
    dag = Dag(n, arcs)

    cpts = []
    for v in range(n):
        parent_arities = [variables[p].arity for p in sorted(u for u, w in arcs if w == v)]
        cpts.append(_faithful_cpt(rng, parent_arities, variables[v].arity, margin, variables[v].name))
    return BayesianNetwork(dag, variables, cpts)
