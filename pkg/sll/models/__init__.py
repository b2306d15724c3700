from .dataset import Dataset, Variable
from .graph import (
    Dag,
    NodeSubset,
    Pdag,
    children,
    common_children,
    neighbors,
    parents,
    skeleton,
    spouses,
    true_markov_blanket,
    v_structures,
)
from .network import BayesianNetwork
from .separation import d_separated

__all__ = [
    "BayesianNetwork",
    "Dag",
    "Dataset",
    "NodeSubset",
    "Pdag",
    "Variable",
    "children",
    "common_children",
    "d_separated",
    "neighbors",
    "parents",
    "skeleton",
    "spouses",
    "true_markov_blanket",
    "v_structures",
]
