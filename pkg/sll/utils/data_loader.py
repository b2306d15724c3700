"""Reading and writing datasets (CSV) and networks / arc lists (JSON)."""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from pydantic import TypeAdapter, ValidationError

from ..core.errors import ArgumentError, DataFormatError
from ..models.dataset import Dataset, Variable
from ..models.graph import Dag, NodeSubset
from ..models.network import BayesianNetwork
from ..schemas.network import ArcList, NetworkFile, VariableSpec

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

_INTEGER = r"[+-]?\d+"
_PAIRS = TypeAdapter(Union[List[Tuple[str, str]], ArcList])


def _read_text(path: PathLike) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc.strerror or exc}") from exc


def load_dataset(path: PathLike, variables: Optional[Sequence[Variable]] = None) -> Dataset:
    """Read a CSV dataset whose header names the variables.

    With ``variables`` (e.g. from a network file) columns are matched by name
    and node indices follow ``variables``; otherwise indices follow the header
    and arities are inferred as ``max + 1`` (at least 2). Row numbers in
    errors count data rows from 1.
    """
    try:
        frame = pd.read_csv(path, header=None, dtype=str, keep_default_na=False, skip_blank_lines=True)
    except FileNotFoundError as exc:
        raise DataFormatError(f"cannot read {path}: no such file") from exc
    except pd.errors.EmptyDataError as exc:
        raise DataFormatError(f"{path} is empty") from exc
    except pd.errors.ParserError as exc:
        raise DataFormatError(f"{path}: {exc}") from exc

    header = [name.strip() for name in frame.iloc[0].tolist()]
    if len(set(header)) != len(header):
        duplicates = sorted({name for name in header if header.count(name) > 1})
        raise DataFormatError(f"duplicate variable names in header: {duplicates}")
    body = frame.iloc[1:]

    raw = np.zeros((len(body), len(header)), dtype=np.int64)
    for position, name in enumerate(header):
        cells = body.iloc[:, position].str.strip()
        bad = np.flatnonzero(~cells.str.fullmatch(_INTEGER).to_numpy(dtype=bool))
        if bad.size:
            row = int(bad[0])
            raise DataFormatError(
                f"cell {body.iloc[row, position]!r} is not an integer", row=row + 1, column=name
            )
        try:
            raw[:, position] = cells.astype(np.int64).to_numpy()
        except (OverflowError, ValueError) as exc:
            raise DataFormatError(f"column {name!r} holds integers outside the 64-bit range") from exc

    if variables is None:
        variables = [
            Variable(i, name, max(2, int(raw[:, i].max()) + 1) if len(raw) else 2)
            for i, name in enumerate(header)
        ]
        column_order = list(range(len(header)))
        values = raw
    else:
        variables = list(variables)
        expected = [variable.name for variable in variables]
        if set(header) != set(expected):
            missing = sorted(set(expected) - set(header))
            extra = sorted(set(header) - set(expected))
            raise DataFormatError(f"CSV header does not match the network: missing {missing}, unexpected {extra}")
        position_of = {name: i for i, name in enumerate(header)}
        values = raw[:, [position_of[name] for name in expected]]
        index_of = {name: i for i, name in enumerate(expected)}
        column_order = [index_of[name] for name in header]

    for variable in variables:
        column = values[:, variable.index]
        bad = np.flatnonzero((column < 0) | (column >= variable.arity))
        if bad.size:
            row = int(bad[0])
            raise DataFormatError(
                f"value {int(column[row])} outside [0, {variable.arity})", row=row + 1, column=variable.name
            )
    logger.debug("loaded %s: %d rows, %d variables", path, len(values), len(variables))
    return Dataset(variables, values, column_order)


def save_dataset(data: Dataset, path: PathLike) -> None:
    frame = pd.DataFrame(np.asarray(data.values), columns=data.names)
    frame.to_csv(path, index=False, lineterminator="\n")


def _parse_network(path: PathLike) -> NetworkFile:
    try:
        return NetworkFile.model_validate_json(_read_text(path))
    except ValidationError as exc:
        raise DataFormatError(f"invalid network file {path}: {exc.errors()[0]['msg']}") from exc


def _structure(spec: NetworkFile, path: PathLike) -> Tuple[List[Variable], Dag]:
    variables = [Variable(i, v.name, v.arity) for i, v in enumerate(spec.variables)]
    if len({v.name for v in variables}) != len(variables):
        raise DataFormatError(f"duplicate variable names in {path}")
    try:
        dag = Dag(len(variables), spec.arcs)
    except ArgumentError as exc:
        raise DataFormatError(f"invalid arcs in {path}: {exc}") from exc
    return variables, dag


def load_structure(path: PathLike) -> Tuple[List[Variable], Dag]:
    """Variables and DAG of a network file; CPTs are not required."""
    return _structure(_parse_network(path), path)


def load_network(path: PathLike) -> BayesianNetwork:
    spec = _parse_network(path)
    variables, dag = _structure(spec, path)
    cpts = []
    for v in range(dag.n):
        table = spec.cpts.get(str(v))
        if table is None:
            raise DataFormatError(f"network file {path} has no CPT for node {v}")
        cpts.append(np.asarray(table, dtype=np.float64))
    try:
        return BayesianNetwork(dag, variables, cpts)
    except (ArgumentError, ValueError) as exc:
        raise DataFormatError(f"invalid CPTs in {path}: {exc}") from exc


def save_network(bn: BayesianNetwork, path: PathLike) -> None:
    spec = NetworkFile(
        variables=[VariableSpec(name=v.name, arity=v.arity) for v in bn.variables],
        arcs=bn.dag.sorted_arcs(),
        cpts={str(v): bn.cpts[v].tolist() for v in range(bn.n)},
    )
    Path(path).write_text(spec.model_dump_json(indent=2) + "\n")


def load_name_pairs(path: PathLike, names: Sequence[str]) -> List[Tuple[int, int]]:
    """``[[a, b], ...]`` or ``{"arcs": [[a, b], ...]}`` with variable names, as index pairs."""
    try:
        parsed = _PAIRS.validate_json(_read_text(path))
    except ValidationError as exc:
        raise DataFormatError(f"invalid pair list in {path}: {exc.errors()[0]['msg']}") from exc
    pairs = parsed.arcs if isinstance(parsed, ArcList) else parsed
    index: Dict[str, int] = {name: i for i, name in enumerate(names)}
    resolved = []
    for a, b in pairs:
        for name in (a, b):
            if name not in index:
                raise DataFormatError(f"unknown variable {name!r} in {path}")
        resolved.append((index[a], index[b]))
    return resolved


def load_learned_dag(path: PathLike, names: Sequence[str]) -> Dag:
    try:
        return Dag(len(names), load_name_pairs(path, names))
    except ArgumentError as exc:
        raise DataFormatError(f"invalid learned structure in {path}: {exc}") from exc


def named(nodes: NodeSubset, names: Sequence[str]) -> List[str]:
    return [names[v] for v in nodes]


def named_pairs(pairs, names: Sequence[str]) -> List[List[str]]:
    return [[names[u], names[v]] for u, v in sorted(pairs)]
