"""Benchmark driver: sample data from a ground-truth network, run methods, score the results.

Every (method, sample size, replicate) cell is an independent job. Cells
regenerate their network and data from seeds derived from the spec seed,
so results are identical whether they run inline or in worker processes.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from pydantic import ValidationError

from ..core.errors import ConfigurationError, SllError
from ..models.dataset import Dataset
from ..models.graph import NodeSubset
from ..models.network import BayesianNetwork
from ..schemas.benchmark import BenchmarkSpec, MetricAggregate, MetricCell, MetricReport
from ..schemas.params import BdeuParams, GreedyParams, SllConfig
from ..utils.data_loader import load_network
from .construction import learn_global
from .evaluation import blanket_sets, compare_structures, neighbor_sets, slhd
from .exact import optimal_network
from .local import LocalLearner
from .sampling import forward_sample, random_dag

logger = logging.getLogger(__name__)

METRICS = ("slhd_neighbors", "slhd_blankets", "shd", "normalized_score", "wall_time")

Job = Tuple[dict, str, int, int]


def derive_seed(*key: int) -> int:
    return int(np.random.SeedSequence(list(key)).generate_state(1)[0])


def truth_network(spec: BenchmarkSpec, replicate: int) -> BayesianNetwork:
    if spec.network is not None:
        try:
            return load_network(spec.network)
        except SllError as exc:
            raise ConfigurationError(f"benchmark network {spec.network}: {exc}") from exc
    generator = spec.generator
    return random_dag(
        generator.n, generator.max_indegree, generator.arity_range, derive_seed(spec.seed, replicate)
    )


def replicate_data(spec: BenchmarkSpec, m: int, replicate: int) -> Tuple[BayesianNetwork, Dataset]:
    bn = truth_network(spec, replicate)
    return bn, forward_sample(bn, m, derive_seed(spec.seed, replicate, m))


def _configs(spec: BenchmarkSpec) -> Tuple[SllConfig, GreedyParams]:
    scoring = BdeuParams(ess=spec.ess)
    config = SllConfig(scoring=scoring, max_indegree=spec.max_indegree, exact_limit=spec.exact_limit)
    greedy = GreedyParams(
        tabu_capacity=spec.tabu_capacity, patience=spec.patience, max_indegree=spec.max_indegree, seed=spec.seed
    )
    return config, greedy


def _local_cell(data: Dataset, bn: BayesianNetwork, config: SllConfig, cell: MetricCell) -> None:
    learner = LocalLearner(data, config)
    start = time.perf_counter()
    learned_neighbors = {t: learner.neighbors(t) for t in range(data.n)}
    cell.neighbor_time = time.perf_counter() - start
    blankets = learner.all_blankets(threads=1)
    cell.wall_time = time.perf_counter() - start
    cell.slhd_neighbors = slhd(learned_neighbors, neighbor_sets(bn.dag))
    cell.slhd_blankets = slhd({t: r.blanket for t, r in blankets.items()}, blanket_sets(bn.dag))
    cell.inexact = any(r.inexact for r in blankets.values())


def run_cell(job: Job) -> MetricCell:
    """One benchmark cell; failures are recorded on the cell, never raised."""
    raw_spec, method, m, replicate = job
    spec = BenchmarkSpec.model_validate(raw_spec)
    cell = MetricCell(method=method, m=m, replicate=replicate)
    try:
        bn, data = replicate_data(spec, m, replicate)
        config, greedy = _configs(spec)
        if method == "sll-local":
            _local_cell(data, bn, config, cell)
            return cell
        start = time.perf_counter()
        if method == "exact":
            result = optimal_network(
                NodeSubset.full(data.n), data, config.scoring, config.max_indegree, config.exact_limit
            )
            dag, cell.inexact = result.dag, result.inexact
        else:
            found = learn_global(data, method, config, greedy)
            dag, cell.inexact = found.dag, found.inexact
        cell.wall_time = time.perf_counter() - start
        metrics = compare_structures(dag, bn.dag, data, config.scoring)
        cell.shd = metrics["shd"]
        cell.normalized_score = metrics["normalized_score"]
        cell.slhd_neighbors = metrics["slhd_neighbors"]
        cell.slhd_blankets = metrics["slhd_blankets"]
    except Exception as exc:
        logger.warning("benchmark cell %s m=%d replicate=%d failed: %s", method, m, replicate, exc)
        cell.failed = True
        cell.error = f"{type(exc).__name__}: {exc}"
    return cell


def aggregate(cells: List[MetricCell], methods: List[str]) -> List[MetricAggregate]:
    """Mean and sample standard deviation per (method, m, metric) over cells that did not fail."""
    frame = pd.DataFrame([cell.model_dump() for cell in cells if not cell.failed])
    if frame.empty:
        return []
    long = frame.melt(id_vars=["method", "m"], value_vars=list(METRICS), var_name="metric").dropna(subset=["value"])
    long["value"] = long["value"].astype(float)
    stats = long.groupby(["method", "m", "metric"], sort=False)["value"].agg(["mean", "std", "count"]).reset_index()
    stats["std"] = stats["std"].fillna(0.0)
    stats["method_rank"] = stats["method"].map({name: i for i, name in enumerate(methods)})
    stats["metric_rank"] = stats["metric"].map({name: i for i, name in enumerate(METRICS)})
    stats = stats.sort_values(["method_rank", "m", "metric_rank"])
    return [
        MetricAggregate(
            method=row["method"], m=int(row["m"]), metric=row["metric"],
            mean=float(row["mean"]), std=float(row["std"]), count=int(row["count"]),
        )
        for row in stats.to_dict("records")
    ]


def run_benchmark(
    spec: BenchmarkSpec, methods: Optional[List[str]] = None, threads: Optional[int] = 1
) -> MetricReport:
    methods = list(methods or spec.methods)
    try:
        spec = BenchmarkSpec.model_validate({**spec.model_dump(), "methods": methods})
    except ValidationError as exc:
        raise ConfigurationError(f"invalid benchmark spec: {exc.errors()[0]['msg']}") from exc
    if "exact" in methods:
        n = spec.generator.n if spec.generator is not None else truth_network(spec, 0).n
        if n > spec.exact_limit:
            raise ConfigurationError(f"exact method requested on {n} variables, above the exact limit {spec.exact_limit}")
    elif spec.network is not None:
        truth_network(spec, 0)

    raw = spec.model_dump()
    jobs: List[Job] = [
        (raw, method, m, replicate)
        for m in spec.sample_sizes
        for replicate in range(spec.replicates)
        for method in methods
    ]
    logger.info("running %d benchmark cells", len(jobs))
    if threads == 1:
        cells = [run_cell(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=threads) as executor:
            cells = list(executor.map(run_cell, jobs))
    cells.sort(key=lambda c: (methods.index(c.method), c.m, c.replicate))
    return MetricReport(cells=cells, aggregates=aggregate(cells, methods))


def write_report(report: MetricReport, out_dir: Path) -> List[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cells_path = out_dir / "cells.csv"
    pd.DataFrame([cell.model_dump() for cell in report.cells]).to_csv(cells_path, index=False, lineterminator="\n")
    aggregates_path = out_dir / "aggregates.json"
    aggregates_path.write_text(
        MetricReport(cells=[], aggregates=report.aggregates).model_dump_json(indent=2, include={"aggregates"}) + "\n"
    )
    return [cells_path, aggregates_path]


def plot_report(cells_csv: Path, out_dir: Path) -> List[Path]:
    """Mean +/- std of each metric against sample size, one SVG per metric, one line per method."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    frame = pd.read_csv(cells_csv)
    frame = frame[~frame["failed"].astype(bool)]
    out_dir = Path(out_dir)
    written = []
    with matplotlib.rc_context({"svg.hashsalt": "sll", "svg.fonttype": "none"}):
        for metric in METRICS:
            data = frame.dropna(subset=[metric])
            if data.empty:
                continue
            fig, ax = plt.subplots(figsize=(5, 3.5))
            for method, group in data.groupby("method", sort=False):
                stats = group.groupby("m")[metric].agg(["mean", "std"]).fillna(0.0)
                ax.errorbar(stats.index, stats["mean"], yerr=stats["std"], marker="o", capsize=3, label=method)
            ax.set_xlabel("sample size")
            ax.set_ylabel(metric.replace("_", " "))
            ax.legend()
            fig.tight_layout()
            path = out_dir / f"{metric}.svg"
            fig.savefig(path, format="svg", metadata={"Date": None})
            plt.close(fig)
            written.append(path)
    return written
