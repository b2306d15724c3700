import numpy as np
import pytest

from sll.core.errors import ArgumentError
from sll.ml.local import (
    LocalLearner,
    SllCache,
    all_blankets,
    find_neighbors,
    find_potential_neighbors,
    find_potential_spouses,
    find_spouses,
    markov_blanket,
)
from sll.ml.sampling import random_dag
from sll.models import Dataset, NodeSubset, d_separated, neighbors, spouses, true_markov_blanket
from sll.schemas.params import SllConfig, VisitOrder

from .utils import explaining_away_network, noisy_or_network, sample

A, B, C = 0, 1, 2


def test_chain_neighbors(chain_data):
    assert find_neighbors(chain_data, B).to_list() == [A, C]
    assert find_neighbors(chain_data, A).to_list() == [B]
    assert find_neighbors(chain_data, C).to_list() == [B]


def test_chain_has_no_spouses(chain_data):
    for t in range(3):
        assert find_spouses(chain_data, t).to_list() == []


def test_collider_spouses(collider_data):
    assert find_neighbors(collider_data, A).to_list() == [C]
    assert find_spouses(collider_data, A).to_list() == [B]
    assert find_spouses(collider_data, B).to_list() == [A]
    assert find_spouses(collider_data, C).to_list() == []
    assert markov_blanket(collider_data, A).to_list() == [B, C]
    assert markov_blanket(collider_data, C).to_list() == [A, B]


def test_potential_neighbors_of_the_collider_child(collider_data):
    assert find_potential_neighbors(collider_data, C).to_list() == [A, B]


def test_independent_variables_have_empty_blankets(independent4):
    for t, result in all_blankets(independent4).items():
        assert result.blanket.to_list() == [], t
        assert not result.inexact


def test_explicit_neighbor_set_for_potential_spouses(collider_data):
    assert find_potential_spouses(collider_data, A, NodeSubset.of([C])).to_list() == [B]
    cache = SllCache()
    assert find_potential_spouses(collider_data, A, NodeSubset(), cache=cache).to_list() == []
    assert A not in cache.potential_spouses


def test_target_inside_neighbor_set_is_rejected(collider_data):
    with pytest.raises(ArgumentError):
        find_potential_spouses(collider_data, A, NodeSubset.of([A, C]))


@pytest.mark.parametrize("target", [-1, 3, 1.0, True, "a"])
def test_invalid_targets(chain_data, target):
    with pytest.raises(ArgumentError):
        find_neighbors(chain_data, target)


def test_numpy_integer_targets_are_accepted(chain_data):
    assert find_neighbors(chain_data, np.int64(B)).to_list() == [A, C]


def test_cached_sets_are_not_recomputed(collider_data):
    learner = LocalLearner(collider_data)
    learner.potential_neighbors(A)
    calls = learner.cache.optimal_network_calls
    assert calls == collider_data.n - 1
    learner.potential_neighbors(A)
    assert learner.cache.optimal_network_calls == calls


def test_shared_cache_matches_fresh_learners(collider_data):
    shared = all_blankets(collider_data)
    for t in range(collider_data.n):
        fresh = LocalLearner(collider_data).markov_blanket(t)
        assert shared[t].neighbors == fresh.neighbors
        assert shared[t].spouses == fresh.spouses


def test_thread_pool_gives_the_same_blankets(chain_data):
    assert all_blankets(chain_data, threads=3) == all_blankets(chain_data, threads=1)


def test_spouse_witnesses_name_the_common_child(collider_data):
    learner = LocalLearner(collider_data)
    found, witnesses = learner.potential_spouses_with_witnesses(A)
    assert found.to_list() == [B]
    assert witnesses[B].to_list() == [C]


def test_data_order_visits_columns_as_they_appeared(chain_data):
    reordered = Dataset(chain_data.variables, chain_data.values, column_order=[2, 1, 0])
    learner = LocalLearner(reordered, SllConfig(visit_order=VisitOrder.DATA_ORDER))
    assert learner._visit(NodeSubset.of([0, 2])) == [2, 0]
    assert learner.neighbors(B).to_list() == [A, C]


def test_oversized_node_sets_mark_the_result_inexact():
    star = noisy_or_network(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    data = sample(star, 3000, seed=5)
    exact = LocalLearner(data).markov_blanket(0)
    assert not exact.inexact
    limited = LocalLearner(data, SllConfig(exact_limit=3))
    result = limited.markov_blanket(0)
    assert result.inexact
    assert ("neighbors", 0) in limited.cache.inexact
    assert limited.markov_blanket(1).inexact




def test_empty_neighbor_set_needs_no_local_networks(collider_data):
    cache = SllCache()
    assert find_potential_spouses(collider_data, A, NodeSubset(), cache=cache).to_list() == []
    assert cache.optimal_network_calls == 0


def test_explicit_neighbor_set_is_cached_once_neighbors_are_known(collider_data):
    learner = LocalLearner(collider_data)
    own = learner.neighbors(A)
    learner.potential_spouses(A, own)
    assert learner.cache.potential_spouses[A].to_list() == [B]


def test_stored_witnesses_keep_the_first_value():
    cache = SllCache()
    first = {B: NodeSubset.of([C])}
    assert cache.store_witnesses(A, first) is first
    assert cache.store_witnesses(A, {B: NodeSubset()}) is first


def test_explaining_away_fixture_d_separation():
    bn, index = explaining_away_network(("t", "u", "s", "w", "v"))
    t, u, s, w, v = (index[name] for name in "tuswv")
    dag = bn.dag
    assert not dag.adjacent(t, v)
    assert v in spouses(dag, t)
    for given in ([], [u], [s], [u, s]):
        assert not d_separated(dag, t, v, NodeSubset.of(given))
    assert d_separated(dag, t, v, NodeSubset.of([u, w]))


@pytest.mark.slow
def test_asymmetric_neighbor_nomination_is_removed():
    bn, index = explaining_away_network(("t", "u", "s", "w", "v"))
    t, v = index["t"], index["v"]
    nominated = corrected = blankets = 0
    for seed in range(20):
        learner = LocalLearner(sample(bn, 50000, seed=seed))
        nominated += v in learner.potential_neighbors(t)
        corrected += learner.neighbors(t) == neighbors(bn.dag, t)
        blankets += learner.markov_blanket(t).blanket == true_markov_blanket(bn.dag, t)
    assert nominated >= 18
    assert corrected >= 18
    assert blankets >= 16


@pytest.mark.slow
def test_spouse_missed_by_the_sweep_is_recovered_by_the_or_rule():
    bn, index = explaining_away_network(("t", "u", "s", "v", "w"))
    t, v = index["t"], index["v"]
    assert v in spouses(bn.dag, t)
    missed = recovered = 0
    for seed in range(20):
        learner = LocalLearner(sample(bn, 50000, seed=seed))
        missed += v not in learner.potential_spouses(t)
        recovered += v in learner.spouses(t)
    assert missed >= 16
    assert recovered >= 16


@pytest.mark.slow
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_shared_cache_is_identical_to_fresh_runs_on_eight_nodes(seed):
    data = sample(random_dag(8, max_indegree=2, seed=seed), 2000, seed=seed)
    shared = all_blankets(data)
    for t in range(data.n):
        assert LocalLearner(data).markov_blanket(t) == shared[t]
