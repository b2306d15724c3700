from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import ArgumentError, DataFormatError


@dataclass(frozen=True)
class Variable:
    index: int
    name: str
    arity: int

    def __post_init__(self):
        if self.arity < 2:
            raise ArgumentError(f"variable {self.name!r} needs arity >= 2, got {self.arity}")


class Dataset:
    """Categorical observations, one column per variable.

    ``values`` is stored column-major (Fortran order) with shape ``(m, n)``;
    column ``v`` holds integers in ``[0, arity(v))``.
    """

    def __init__(
        self,
        variables: Sequence[Variable],
        values: np.ndarray,
        column_order: Optional[Sequence[int]] = None,
    ):
        variables = tuple(variables)
        for position, variable in enumerate(variables):
            if variable.index != position:
                raise ArgumentError(
                    f"variable indices must be dense 0..n-1; {variable.name!r} has index {variable.index}"
                )
        names = [variable.name for variable in variables]
        if len(set(names)) != len(names):
            raise DataFormatError("duplicate variable names")

        values = np.asarray(values)
        if values.ndim != 2 or values.shape[1] != len(variables):
            raise ArgumentError(
                f"value matrix must have shape (m, {len(variables)}), got {values.shape}"
            )
        if values.size and not np.issubdtype(values.dtype, np.integer):
            raise DataFormatError("dataset values must be integers")
        values = np.asfortranarray(values, dtype=np.int64)

        for variable in variables:
            column = values[:, variable.index]
            bad = np.flatnonzero((column < 0) | (column >= variable.arity))
            if bad.size:
                row = int(bad[0])
                raise DataFormatError(
                    f"value {int(column[row])} outside [0, {variable.arity})",
                    row=row,
                    column=variable.name,
                )

        if column_order is None:
            column_order = range(len(variables))
        column_order = tuple(int(c) for c in column_order)
        if sorted(column_order) != list(range(len(variables))):
            raise ArgumentError("column_order must be a permutation of the variable indices")

        values.setflags(write=False)
        self.variables: Tuple[Variable, ...] = variables
        self.values = values
        self.column_order = column_order
        self._index: Dict[str, int] = {name: i for i, name in enumerate(names)}

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return int(self.values.shape[0])

    @property
    def names(self) -> List[str]:
        return [variable.name for variable in self.variables]

    @property
    def arities(self) -> np.ndarray:
        return np.array([variable.arity for variable in self.variables], dtype=np.int64)

    def arity(self, v: int) -> int:
        return self.variables[v].arity

    def column(self, v: int) -> np.ndarray:
        return self.values[:, v]

    def index_of(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ArgumentError(f"unknown variable {name!r}") from None

    def take_rows(self, rows: Sequence[int]) -> "Dataset":
        return Dataset(self.variables, self.values[np.asarray(rows, dtype=np.int64)], self.column_order)

    def __len__(self) -> int:
        return self.m

    def __repr__(self) -> str:
        return f"Dataset(n={self.n}, m={self.m})"
