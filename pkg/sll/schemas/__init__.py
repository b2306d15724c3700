from .benchmark import BenchmarkSpec, GeneratorSpec, MetricAggregate, MetricCell, MetricReport
from .network import ArcList, NetworkFile, VariableSpec
from .params import BdeuParams, GreedyParams, SllConfig, VisitOrder

__all__ = [
    "ArcList",
    "BdeuParams",
    "BenchmarkSpec",
    "GeneratorSpec",
    "GreedyParams",
    "MetricAggregate",
    "MetricCell",
    "MetricReport",
    "NetworkFile",
    "SllConfig",
    "VariableSpec",
    "VisitOrder",
]
