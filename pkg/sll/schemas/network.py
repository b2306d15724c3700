from typing import Dict, List, Tuple

from pydantic import BaseModel, Field


class VariableSpec(BaseModel):
    name: str
    arity: int = Field(..., ge=2)


class NetworkFile(BaseModel):
    """On-disk network: variables, ``[parent, child]`` index pairs and CPT rows keyed by node index."""

    variables: List[VariableSpec]
    arcs: List[Tuple[int, int]] = []
    cpts: Dict[str, List[List[float]]] = {}


class ArcList(BaseModel):
    arcs: List[Tuple[str, str]] = []
