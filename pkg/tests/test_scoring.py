import math
from collections import defaultdict

import numpy as np
import pytest

from sll.core.errors import ArgumentError
from sll.ml.scoring import BdeuScorer, bdeu_local_score, build_score_table, score_dag
from sll.models import Dag, NodeSubset
from sll.models.network import parent_config_index
from sll.schemas.params import BdeuParams

from .utils import all_dags, class_key, dataset, random_data


def test_single_binary_node_matches_hand_computation():
    data = dataset([[0], [0], [1]], [2])
    # lnG(1) - lnG(4) + lnG(2.5) - lnG(0.5) + lnG(1.5) - lnG(0.5) = ln(0.75 * 0.5 / 6)
    assert bdeu_local_score(0, NodeSubset(), data) == pytest.approx(-math.log(16.0), abs=1e-12)


def test_one_parent_family_matches_direct_formula():
    values = [[0, 0], [0, 1], [1, 1], [1, 1], [0, 0], [1, 0]]
    data = dataset(values, [2, 2])
    ess = 2.0
    q, r = 2, 2
    counts = defaultdict(int)
    for parent, child in values:
        counts[(parent, child)] += 1
    expected = 0.0
    for j in range(q):
        n_j = counts[(j, 0)] + counts[(j, 1)]
        expected += math.lgamma(ess / q) - math.lgamma(ess / q + n_j)
        for k in range(r):
            expected += math.lgamma(ess / (q * r) + counts[(j, k)]) - math.lgamma(ess / (q * r))
    score = bdeu_local_score(1, NodeSubset.of([0]), data, BdeuParams(ess=ess))
    assert score == pytest.approx(expected, abs=1e-12)


def test_empty_dataset_scores_zero():
    data = dataset(np.zeros((0, 2)), [2, 3])
    assert bdeu_local_score(0, NodeSubset.of([1]), data) == 0.0


def test_node_in_its_own_parent_set_is_rejected():
    data = dataset([[0, 1]], [2, 2])
    with pytest.raises(ArgumentError):
        bdeu_local_score(0, NodeSubset.of([0]), data)
    with pytest.raises(ArgumentError):
        build_score_table(0, NodeSubset.of([0, 1]), data)


def test_nonpositive_ess_is_rejected():
    with pytest.raises(ValueError):
        BdeuParams(ess=0.0)


def test_parent_configuration_index_is_mixed_radix_lowest_parent_first():
    values = np.array([[0, 0], [0, 2], [1, 0], [1, 2]])
    assert parent_config_index(values, [2, 3]).tolist() == [0, 2, 3, 5]


def test_score_table_covers_parent_sets_up_to_the_bound():
    data = random_data(5, 100, seed=0)
    table = build_score_table(0, NodeSubset.of([1, 2, 3, 4]), data, max_indegree=2)
    assert len(table) == 1 + 4 + 6
    assert NodeSubset.of([1, 4]) in table
    assert NodeSubset.of([1, 2, 3]) not in table
    assert table.rows()[0][0] == 0


def test_score_table_with_zero_indegree_has_only_the_empty_set():
    data = random_data(3, 50, seed=1)
    table = build_score_table(0, NodeSubset.of([1, 2]), data, max_indegree=0)
    assert [mask for mask, _ in table.rows()] == [0]


def test_memoised_scorer_agrees_with_direct_scoring():
    data = random_data(4, 300, seed=2, max_arity=3)
    scorer = BdeuScorer(data)
    for v in range(4):
        for mask in range(16):
            if mask >> v & 1:
                continue
            direct = bdeu_local_score(v, NodeSubset(mask), data)
            assert scorer.local_score(v, mask) == direct
    evaluations = scorer.evaluations
    scorer.local_score(0, 0b0110)
    assert scorer.evaluations == evaluations


def test_score_dag_is_the_sum_of_local_scores():
    data = random_data(3, 200, seed=3)
    dag = Dag(3, [(0, 1), (2, 1)])
    expected = sum(bdeu_local_score(v, NodeSubset(dag.parent_mask(v)), data) for v in range(3))
    assert score_dag(dag, data) == pytest.approx(expected, abs=1e-12)
    with pytest.raises(ArgumentError):
        score_dag(Dag(2), data)


def test_markov_equivalent_dags_score_the_same():
    dags = all_dags(3)
    assert len(dags) == 25
    for seed in range(20):
        data = random_data(3, 150, seed=seed, max_arity=3)
        scorer = BdeuScorer(data)
        by_class = defaultdict(list)
        for dag in dags:
            by_class[class_key(dag)].append(scorer.score_dag(dag))
        for scores in by_class.values():
            assert max(scores) - min(scores) <= 1e-9 * max(1.0, abs(scores[0]))


def test_two_row_binary_column_scores_minus_three_ln_two():
    data = dataset([[0], [1]], [2])
    assert score_dag(Dag(1), data) == pytest.approx(-3.0 * math.log(2.0), abs=1e-12)


def test_scores_ignore_row_order():
    data = random_data(3, 200, seed=9, max_arity=3)
    shuffled = data.take_rows(np.random.default_rng(0).permutation(data.m))
    for v, mask in [(0, 0b110), (1, 0b001), (2, 0)]:
        assert bdeu_local_score(v, NodeSubset(mask), shuffled) == pytest.approx(
            bdeu_local_score(v, NodeSubset(mask), data), abs=1e-9
        )


@pytest.mark.slow
def test_true_arcs_raise_and_false_arcs_lower_the_score(collider_bn):
    from .utils import sample

    agree = 0
    for seed in range(20):
        scorer = BdeuScorer(sample(collider_bn, 50000, seed=seed))
        with_true = scorer.local_score(2, 0b011) > scorer.local_score(2, 0b001)
        without_false = scorer.local_score(0, 0b010) < scorer.local_score(0, 0)
        agree += with_true and without_false
    assert agree >= 19
