from typing import Any, Dict, List, Optional

from pydantic import BaseModel


class ScoreResult(BaseModel):
    score: float
    config: Dict[str, Any]


class StructureResult(BaseModel):
    arcs: List[List[str]]
    score: float
    inexact: bool = False
    config: Dict[str, Any]


class BlanketReport(BaseModel):
    target: str
    neighbors: List[str]
    spouses: List[str]
    blanket: List[str]
    inexact: bool = False
    config: Dict[str, Any]


class CpdagPayload(BaseModel):
    directed: List[List[str]]
    undirected: List[List[str]]


class GlobalResult(BaseModel):
    arcs: List[List[str]]
    cpdag: CpdagPayload
    score: float
    inexact: bool = False
    config: Dict[str, Any]


class SampleResult(BaseModel):
    rows: int
    output: str
    config: Dict[str, Any]


class EvaluationResult(BaseModel):
    shd: int
    normalized_score: float
    slhd_neighbors: int
    slhd_blankets: int
    config: Dict[str, Any]


class BenchResult(BaseModel):
    report_dir: str
    cells: int
    failed: int
    plots: Optional[List[str]] = None
    config: Dict[str, Any]
