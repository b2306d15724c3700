"""Fixture builders and brute-force oracles shared by the test modules."""

import itertools
from typing import Dict, List, Sequence, Tuple

import numpy as np

from sll.models import Dag, Dataset, Variable, skeleton, v_structures
from sll.models.network import BayesianNetwork
from sll.ml.sampling import forward_sample


def binary_variables(names: Sequence[str]) -> List[Variable]:
    return [Variable(i, name, 2) for i, name in enumerate(names)]


def dataset(values, arities: Sequence[int], names: Sequence[str] = None) -> Dataset:
    names = names or [f"X{i}" for i in range(len(arities))]
    variables = [Variable(i, name, arity) for i, (name, arity) in enumerate(zip(names, arities))]
    return Dataset(variables, np.asarray(values, dtype=np.int64).reshape(-1, len(arities)))


def noisy_or_cpt(k: int, leak: float = 0.1, strength: float = 0.8) -> np.ndarray:
    """Binary child of ``k`` binary parents: each active parent independently switches it on."""
    rows = []
    for config in itertools.product((0, 1), repeat=k):
        off = (1.0 - leak) * (1.0 - strength) ** sum(config)
        rows.append([off, 1.0 - off])
    return np.array(rows)


def noisy_or_network(n: int, arcs: Sequence[Tuple[int, int]], names: Sequence[str] = None) -> BayesianNetwork:
    dag = Dag(n, arcs)
    variables = binary_variables(names or [f"X{i}" for i in range(n)])
    cpts = [noisy_or_cpt(bin(dag.parent_mask(v)).count("1")) for v in range(n)]
    return BayesianNetwork(dag, variables, cpts)


def collider_network() -> BayesianNetwork:
    """a -> c <- b with c an OR of its parents plus noise."""
    variables = binary_variables(["a", "b", "c"])
    cpts = [
        np.array([[0.5, 0.5]]),
        np.array([[0.5, 0.5]]),
        np.array([[0.95, 0.05], [0.05, 0.95], [0.05, 0.95], [0.05, 0.95]]),
    ]
    return BayesianNetwork(Dag(3, [(0, 2), (1, 2)]), variables, cpts)


def chain_network() -> BayesianNetwork:
    """a -> b -> c, each child copying its parent with probability 0.9."""
    variables = binary_variables(["a", "b", "c"])
    copy = np.array([[0.9, 0.1], [0.1, 0.9]])
    cpts = [np.array([[0.5, 0.5]]), copy, copy]
    return BayesianNetwork(Dag(3, [(0, 1), (1, 2)]), variables, cpts)


def explaining_away_network(order: Sequence[str]) -> Tuple[BayesianNetwork, Dict[str, int]]:
    """t -> u, t -> s, v -> s, u -> v, w -> u, w -> v with node indices taken from ``order``.

    t and v are non-adjacent but d-connected given every subset of {u, s}, so
    any local network on {t, u, s, v} joins them. ``order`` decides whether v
    or w is swept first.
    """
    index = {name: i for i, name in enumerate(order)}
    arcs = [("t", "u"), ("t", "s"), ("v", "s"), ("u", "v"), ("w", "u"), ("w", "v")]
    return noisy_or_network(5, [(index[a], index[b]) for a, b in arcs], list(order)), index


def independent_data(n: int, m: int, seed: int) -> Dataset:
    rng = np.random.default_rng(seed)
    return Dataset(binary_variables([f"X{i}" for i in range(n)]), rng.integers(0, 2, size=(m, n)))


def random_data(n: int, m: int, seed: int, max_arity: int = 2) -> Dataset:
    rng = np.random.default_rng(seed)
    arities = rng.integers(2, max_arity + 1, size=n)
    values = np.column_stack([rng.integers(0, a, size=m) for a in arities])
    return dataset(values, arities.tolist())


def all_dags(n: int) -> List[Dag]:
    """Every DAG on ``n`` labelled nodes (25 for n = 3, 543 for n = 4)."""
    pairs = list(itertools.combinations(range(n), 2))
    found = []
    for choice in itertools.product((0, 1, 2), repeat=len(pairs)):
        arcs = []
        for (u, v), c in zip(pairs, choice):
            if c == 1:
                arcs.append((u, v))
            elif c == 2:
                arcs.append((v, u))
        dag = _try_dag(n, arcs)
        if dag is not None:
            found.append(dag)
    return found


def _try_dag(n, arcs):
    from sll.core.errors import ArgumentError

    try:
        return Dag(n, arcs)
    except ArgumentError:
        return None


def random_structure(rng: np.random.Generator, n: int, density: float = 0.4) -> Dag:
    order = rng.permutation(n)
    arcs = [
        (int(order[i]), int(order[j]))
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < density
    ]
    return Dag(n, arcs)


def class_key(dag: Dag):
    return skeleton(dag), tuple(v_structures(dag))


def sample(bn: BayesianNetwork, m: int, seed: int) -> Dataset:
    return forward_sample(bn, m, seed)


def subsets_of(nodes: Sequence[int], max_size: int):
    for size in range(max_size + 1):
        yield from itertools.combinations(nodes, size)


def marginal(joint: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    drop = tuple(axis for axis in range(joint.ndim) if axis not in keep)
    return joint.sum(axis=drop)


def conditionally_independent(joint: np.ndarray, u: int, v: int, given: Sequence[int], tol: float = 1e-9) -> bool:
    """p(u, v, Z) p(Z) == p(u, Z) p(v, Z) for every assignment."""
    keep = sorted([u, v, *given])
    p_uvz = marginal(joint, keep)
    axes = {node: i for i, node in enumerate(keep)}
    p_z = p_uvz.sum(axis=(axes[u], axes[v]), keepdims=True)
    p_uz = p_uvz.sum(axis=axes[v], keepdims=True)
    p_vz = p_uvz.sum(axis=axes[u], keepdims=True)
    return bool(np.all(np.abs(p_uvz * p_z - p_uz * p_vz) <= tol))
