import itertools

import networkx as nx
import numpy as np
import pytest

from sll.core.errors import ArgumentError
from sll.ml.sampling import random_dag
from sll.models import Dag, NodeSubset, d_separated

from .utils import conditionally_independent, random_structure, subsets_of

A, B, C = 0, 1, 2


def _networkx_separated(dag: Dag, u, v, given) -> bool:
    check = getattr(nx, "is_d_separator", None) or nx.d_separated
    return check(dag.to_networkx(), {u}, {v}, set(given))


def test_chain_blocked_by_middle_node():
    dag = Dag(3, [(A, B), (B, C)])
    assert not d_separated(dag, A, C)
    assert d_separated(dag, A, C, NodeSubset.of([B]))


def test_collider_activated_by_conditioning():
    dag = Dag(3, [(A, C), (B, C)])
    assert d_separated(dag, A, B)
    assert not d_separated(dag, A, B, NodeSubset.of([C]))


def test_collider_activated_by_descendant():
    dag = Dag(4, [(A, C), (B, C), (C, 3)])
    assert not d_separated(dag, A, B, NodeSubset.of([3]))


@pytest.mark.parametrize("u, v, given", [(A, A, []), (A, B, [A]), (A, B, [B]), (A, 7, [])])
def test_invalid_queries(u, v, given):
    dag = Dag(3, [(A, B)])
    with pytest.raises(ArgumentError):
        d_separated(dag, u, v, NodeSubset.of(given))


def test_agrees_with_path_definition_and_is_symmetric():
    rng = np.random.default_rng(1)
    for _ in range(40):
        dag = random_structure(rng, 6, density=0.35)
        for u, v in itertools.combinations(range(6), 2):
            others = [x for x in range(6) if x not in (u, v)]
            for given in subsets_of(others, 2):
                z = NodeSubset.of(given)
                expected = _networkx_separated(dag, u, v, given)
                assert d_separated(dag, u, v, z) == expected
                assert d_separated(dag, v, u, z) == expected


def test_separation_implies_independence_in_the_joint():
    for seed in range(15):
        bn = random_dag(5, max_indegree=2, arity_range=(2, 2), seed=seed)
        joint = bn.joint_distribution()
        for u, v in itertools.combinations(range(5), 2):
            others = [x for x in range(5) if x not in (u, v)]
            for given in subsets_of(others, 2):
                if d_separated(bn.dag, u, v, NodeSubset.of(given)):
                    assert conditionally_independent(joint, u, v, given)


@pytest.mark.slow
def test_separation_matches_independence_on_faithful_networks():
    for seed in range(100):
        bn = random_dag(5, max_indegree=2, arity_range=(2, 3), seed=seed)
        joint = bn.joint_distribution()
        for u, v in itertools.combinations(range(5), 2):
            others = [x for x in range(5) if x not in (u, v)]
            for given in subsets_of(others, 2):
                separated = d_separated(bn.dag, u, v, NodeSubset.of(given))
                assert separated == conditionally_independent(joint, u, v, given), (seed, u, v, given)
