from typing import List, Sequence, Tuple

import numpy as np

from ..core.errors import ArgumentError
from .dataset import Variable
from .graph import Dag, NodeSubset

CPT_TOLERANCE = 1e-9


def parent_config_index(parent_values: np.ndarray, parent_arities: Sequence[int]) -> np.ndarray:
    """Mixed-radix row index of each parent configuration.

    ``parent_values`` has one column per parent, parents sorted by node index;
    the lowest-index parent is the most significant digit.
    """
    rows = parent_values.shape[0]
    index = np.zeros(rows, dtype=np.int64)
    for column, arity in enumerate(parent_arities):
        index = index * int(arity) + parent_values[:, column]
    return index


class BayesianNetwork:
    """A DAG with one conditional probability table per node.

    ``cpts[v]`` has shape ``(q, r)``: ``q`` is the product of the parent
    arities (parents ascending by index, mixed-radix rows) and ``r`` the arity
    of ``v``. Every row is a probability vector.
    """

    def __init__(self, dag: Dag, variables: Sequence[Variable], cpts: Sequence[np.ndarray]):
        variables = tuple(variables)
        if dag.n != len(variables):
            raise ArgumentError(f"DAG has {dag.n} nodes but {len(variables)} variables were given")
        if len(cpts) != dag.n:
            raise ArgumentError(f"expected {dag.n} CPTs, got {len(cpts)}")

        tables = []
        for v, table in enumerate(cpts):
            table = np.asarray(table, dtype=np.float64)
            parent_arities = [variables[p].arity for p in NodeSubset(dag.parent_mask(v))]
            expected = (int(np.prod(parent_arities, dtype=np.int64)), variables[v].arity)
            if table.shape != expected:
                raise ArgumentError(
                    f"CPT of {variables[v].name!r} has shape {table.shape}, expected {expected}"
                )
            if np.any(table < 0):
                raise ArgumentError(f"CPT of {variables[v].name!r} has negative entries")
            sums = table.sum(axis=1)
            if np.any(np.abs(sums - 1.0) > CPT_TOLERANCE):
                raise ArgumentError(f"CPT rows of {variables[v].name!r} do not sum to 1")
            table.setflags(write=False)
            tables.append(table)

        self.dag = dag
        self.variables = variables
        self.cpts: Tuple[np.ndarray, ...] = tuple(tables)

    @property
    def n(self) -> int:
        return self.dag.n

    @property
    def names(self) -> List[str]:
        return [variable.name for variable in self.variables]

    def parents(self, v: int) -> List[int]:
        return NodeSubset(self.dag.parent_mask(v)).to_list()

    def parent_arities(self, v: int) -> List[int]:
        return [self.variables[p].arity for p in self.parents(v)]

    def joint_distribution(self) -> np.ndarray:
        """Full joint as an array with one axis per node (small networks only)."""
        shape = tuple(variable.arity for variable in self.variables)
        if int(np.prod(shape, dtype=np.int64)) > 1 << 22:
            raise ArgumentError("joint distribution too large to enumerate")
        assignments = np.indices(shape).reshape(self.n, -1).T
        probability = np.ones(assignments.shape[0])
        for v in range(self.n):
            pars = self.parents(v)
            rows = parent_config_index(assignments[:, pars], self.parent_arities(v))
            probability *= self.cpts[v][rows, assignments[:, v]]
        return probability.reshape(shape)
