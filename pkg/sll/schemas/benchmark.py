from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from ..core.config import settings

BENCH_METHODS = ("sll-local", "sll-c", "sll-g", "greedy", "exact")


class GeneratorSpec(BaseModel):
    n: int = Field(..., ge=1)
    max_indegree: int = Field(3, ge=0)
    arity_range: Tuple[int, int] = (2, 4)

    @field_validator("arity_range")
    @classmethod
    def validate_arity_range(cls, value):
        lo, hi = value
        if lo < 2 or hi < lo:
            raise ValueError(f"arity range must satisfy 2 <= lo <= hi, got {value}")
        return value


class BenchmarkSpec(BaseModel):
    """One benchmark run: a fixed network file or a random-network generator, sampled at several sizes."""

    network: Optional[str] = None
    generator: Optional[GeneratorSpec] = None
    sample_sizes: List[int] = [500, 1000, 5000]
    replicates: int = Field(10, ge=1)
    seed: int = 0
    methods: List[str] = ["sll-local", "sll-c", "sll-g", "greedy"]
    ess: float = Field(default_factory=lambda: settings.ess, gt=0.0)
    max_indegree: int = Field(default_factory=lambda: settings.max_indegree, ge=0)
    exact_limit: int = Field(default_factory=lambda: settings.exact_limit, ge=3)
    tabu_capacity: int = Field(default_factory=lambda: settings.tabu_capacity, ge=1)
    patience: int = Field(default_factory=lambda: settings.patience, ge=0)

    @field_validator("sample_sizes")
    @classmethod
    def validate_sample_sizes(cls, value):
        if not value or any(m <= 0 for m in value):
            raise ValueError("sample sizes must be a nonempty list of positive integers")
        return value

    @field_validator("methods")
    @classmethod
    def validate_methods(cls, value):
        unknown = [method for method in value if method not in BENCH_METHODS]
        if unknown or not value:
            raise ValueError(f"methods must be drawn from {', '.join(BENCH_METHODS)}; got {value}")
        return value

    @model_validator(mode="after")
    def validate_source(self):
        if (self.network is None) == (self.generator is None):
            raise ValueError("exactly one of 'network' and 'generator' must be given")
        return self


class MetricCell(BaseModel):
    method: str
    m: int
    replicate: int
    slhd_neighbors: Optional[int] = None
    slhd_blankets: Optional[int] = None
    shd: Optional[int] = None
    normalized_score: Optional[float] = None
    neighbor_time: Optional[float] = None
    wall_time: float = 0.0
    inexact: bool = False
    failed: bool = False
    error: Optional[str] = None


class MetricAggregate(BaseModel):
    method: str
    m: int
    metric: str
    mean: float
    std: float
    count: int


class MetricReport(BaseModel):
    cells: List[MetricCell]
    aggregates: List[MetricAggregate]
