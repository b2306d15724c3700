import json

import numpy as np
import pytest

from sll.core.errors import DataFormatError
from sll.models import Variable
from sll.utils.data_loader import (
    load_dataset,
    load_learned_dag,
    load_name_pairs,
    load_network,
    load_structure,
    save_dataset,
    save_network,
)


def _write(path, text):
    path.write_text(text)
    return path


def test_arities_are_inferred_from_the_data(tmp_path):
    data = load_dataset(_write(tmp_path / "d.csv", "a,b\n0,2\n1,0\n0,1\n"))
    assert data.names == ["a", "b"]
    assert data.arities.tolist() == [2, 3]
    assert data.values.tolist() == [[0, 2], [1, 0], [0, 1]]
    assert data.column_order == (0, 1)


def test_constant_column_is_still_binary(tmp_path):
    data = load_dataset(_write(tmp_path / "d.csv", "a\n0\n0\n"))
    assert data.arity(0) == 2


def test_columns_are_matched_to_network_variables_by_name(tmp_path):
    variables = [Variable(0, "a", 2), Variable(1, "b", 3)]
    data = load_dataset(_write(tmp_path / "d.csv", "b,a\n2,1\n0,0\n"), variables)
    assert data.names == ["a", "b"]
    assert data.values.tolist() == [[1, 2], [0, 0]]
    assert data.column_order == (1, 0)


def test_non_integer_cell_reports_row_and_column(tmp_path):
    with pytest.raises(DataFormatError) as caught:
        load_dataset(_write(tmp_path / "d.csv", "a,b\n0,1\n1,x\n"))
    assert caught.value.row == 2
    assert caught.value.column == "b"


def test_float_literal_is_not_an_integer(tmp_path):
    with pytest.raises(DataFormatError) as caught:
        load_dataset(_write(tmp_path / "d.csv", "a,b\n0,1\n1.0,0\n"))
    assert caught.value.row == 2
    assert caught.value.column == "a"


def test_value_outside_the_declared_arity(tmp_path):
    variables = [Variable(0, "a", 2)]
    with pytest.raises(DataFormatError) as caught:
        load_dataset(_write(tmp_path / "d.csv", "a\n0\n1\n2\n"), variables)
    assert caught.value.row == 3


@pytest.mark.parametrize(
    "text",
    ["a,a\n0,1\n", "a\n-1\n", "a\n0.5\n", "a\n1.0\n", "a\n1e0\n", "a\n0x1\n"],
)
def test_malformed_datasets(tmp_path, text):
    with pytest.raises(DataFormatError):
        load_dataset(_write(tmp_path / "d.csv", text))


def test_header_must_match_the_network(tmp_path):
    with pytest.raises(DataFormatError):
        load_dataset(_write(tmp_path / "d.csv", "a,c\n0,0\n"), [Variable(0, "a", 2), Variable(1, "b", 2)])


def test_missing_file(tmp_path):
    with pytest.raises(DataFormatError):
        load_dataset(tmp_path / "absent.csv")


def test_saved_dataset_reloads(tmp_path, chain_data):
    save_dataset(chain_data, tmp_path / "chain.csv")
    reloaded = load_dataset(tmp_path / "chain.csv", chain_data.variables)
    assert np.array_equal(reloaded.values, chain_data.values)


def test_saved_network_reloads(tmp_path, collider_bn):
    save_network(collider_bn, tmp_path / "net.json")
    reloaded = load_network(tmp_path / "net.json")
    assert reloaded.dag == collider_bn.dag
    assert reloaded.names == collider_bn.names
    assert all(np.allclose(x, y) for x, y in zip(reloaded.cpts, collider_bn.cpts))


def test_structure_does_not_need_cpts(tmp_path):
    spec = {"variables": [{"name": "a", "arity": 2}, {"name": "b", "arity": 2}], "arcs": [[0, 1]]}
    variables, dag = load_structure(_write(tmp_path / "s.json", json.dumps(spec)))
    assert [v.name for v in variables] == ["a", "b"]
    assert dag.sorted_arcs() == [(0, 1)]
    with pytest.raises(DataFormatError):
        load_network(tmp_path / "s.json")


@pytest.mark.parametrize(
    "spec",
    [
        {"variables": [{"name": "a", "arity": 1}]},
        {"variables": [{"name": "a", "arity": 2}, {"name": "a", "arity": 2}]},
        {"variables": [{"name": "a", "arity": 2}, {"name": "b", "arity": 2}], "arcs": [[0, 1], [1, 0]]},
        {"variables": [{"name": "a", "arity": 2}], "cpts": {"0": [[0.7, 0.7]]}},
    ],
)
def test_invalid_network_files(tmp_path, spec):
    path = _write(tmp_path / "n.json", json.dumps(spec))
    with pytest.raises(DataFormatError):
        load_network(path)


def test_name_pairs_accept_both_layouts(tmp_path):
    names = ["a", "b", "c"]
    bare = _write(tmp_path / "bare.json", '[["a", "b"], ["c", "b"]]')
    wrapped = _write(tmp_path / "wrapped.json", '{"arcs": [["a", "b"], ["c", "b"]]}')
    assert load_name_pairs(bare, names) == [(0, 1), (2, 1)]
    assert load_name_pairs(wrapped, names) == [(0, 1), (2, 1)]


def test_unknown_names_and_cycles_are_format_errors(tmp_path):
    names = ["a", "b"]
    with pytest.raises(DataFormatError):
        load_name_pairs(_write(tmp_path / "x.json", '[["a", "z"]]'), names)
    with pytest.raises(DataFormatError):
        load_learned_dag(_write(tmp_path / "y.json", '[["a", "b"], ["b", "a"]]'), names)
