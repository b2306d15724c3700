#!/usr/bin/env python3
"""
SLL - Command Line Interface

Structure learning for discrete Bayesian networks: scoring, exact and greedy
search, local neighbor/spouse learning, global construction, sampling,
evaluation and benchmarking. Results are JSON on stdout (or --output),
diagnostics go to stderr.
"""

import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click
from pydantic import BaseModel, ValidationError

from .core.config import settings
from .core.errors import ArgumentError, ConfigurationError, DataFormatError
from .core.logging import configure_logging
from .ml.bench import plot_report, run_benchmark, write_report
from .ml.construction import METHODS, learn_global
from .ml.equivalence import dag_to_cpdag
from .ml.evaluation import compare_structures
from .ml.exact import optimal_network
from .ml.greedy import EdgeConstraint, greedy_search
from .ml.local import LocalLearner
from .ml.sampling import forward_sample
from .ml.scoring import BdeuScorer, build_score_table
from .models.dataset import Dataset
from .models.graph import NodeSubset
from .schemas.benchmark import BENCH_METHODS, BenchmarkSpec
from .schemas.params import BdeuParams, GreedyParams, SllConfig, VisitOrder
from .schemas.results import (
    BenchResult,
    BlanketReport,
    CpdagPayload,
    EvaluationResult,
    GlobalResult,
    SampleResult,
    ScoreResult,
    StructureResult,
)
from .utils.data_loader import (
    load_dataset,
    load_learned_dag,
    load_name_pairs,
    load_network,
    load_structure,
    named,
    named_pairs,
    save_dataset,
)

existing_file = click.Path(exists=True, dir_okay=False)


@dataclass
class RunContext:
    seed: int
    threads: int
    output: str


def _round_floats(value: Any, digits: int) -> Any:
    if isinstance(value, float):
        return float(f"{value:.{digits}g}")
    if isinstance(value, dict):
        return {key: _round_floats(item, digits) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_floats(item, digits) for item in value]
    return value


def _resolved_config(ctx: click.Context) -> Dict[str, Any]:
    """Global flags plus the subcommand's resolved parameters, in declaration order."""
    config: Dict[str, Any] = {"command": ctx.info_name}
    config.update(ctx.parent.params if ctx.parent is not None else {})
    config["threads"] = ctx.obj.threads
    for key, value in ctx.params.items():
        config[key] = value.value if isinstance(value, VisitOrder) else value
    return _round_floats(config, settings.float_digits)


def _emit(ctx: click.Context, results: Sequence[BaseModel]) -> None:
    lines = [
        json.dumps(_round_floats(result.model_dump(), settings.float_digits), ensure_ascii=False)
        for result in results
    ]
    text = "\n".join(lines) + "\n"
    if ctx.obj.output == "-":
        click.echo(text, nl=False)
    else:
        Path(ctx.obj.output).write_text(text)


def _scoring(ess: float) -> BdeuParams:
    return BdeuParams(ess=ess)


def _resolve_names(data: Dataset, names: Sequence[str], param: str) -> List[int]:
    try:
        return [data.index_of(name) for name in names]
    except ArgumentError as exc:
        raise click.BadParameter(str(exc), param_hint=param) from exc


def ess_option(f):
    return click.option("--ess", type=click.FloatRange(min=0.0, min_open=True), default=lambda: settings.ess,
                        show_default="SLL_ESS or 1.0", help="Equivalent sample size of the BDeu prior")(f)


def indegree_option(f):
    return click.option("--max-indegree", type=click.IntRange(min=0), default=lambda: settings.max_indegree,
                        show_default="SLL_MAX_INDEGREE or 5", help="Maximum number of parents per node")(f)


def exact_limit_option(f):
    return click.option("--exact-limit", type=click.IntRange(min=3), default=lambda: settings.exact_limit,
                        show_default="SLL_EXACT_LIMIT or 20",
                        help="Largest node set searched exactly before falling back to TABU search")(f)


def tabu_options(f):
    f = click.option("--patience", type=click.IntRange(min=0), default=lambda: settings.patience,
                     show_default="15", help="Non-improving moves before the search stops")(f)
    return click.option("--tabu", type=click.IntRange(min=1), default=lambda: settings.tabu_capacity,
                        show_default="100", help="Number of recent structures kept in the TABU list")(f)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for every random choice")
@click.option("--threads", type=click.IntRange(min=1), default=None,
              help="Worker parallelism (default: SLL_THREADS or all CPUs)")
@click.option("--quiet", is_flag=True, help="Only log errors")
@click.option("--output", default="-", show_default=True, help="Where to write JSON results ('-' for stdout)")
@click.version_option(settings.version, prog_name=settings.app_name)
@click.pass_context
def cli(ctx, seed, threads, quiet, output):
    """Score-based local structure learning for discrete Bayesian networks"""
    configure_logging("error" if quiet else None)
    ctx.obj = RunContext(seed=seed, threads=threads or settings.threads or os.cpu_count() or 1, output=output)


@cli.command()
@click.option("--network", required=True, type=existing_file, help="Network JSON whose structure is scored")
@click.option("--data", required=True, type=existing_file, help="CSV dataset")
@ess_option
@click.option("--dump-table", "dump_table", default=None, metavar="NAME",
              help="Also write the score table of variable NAME (all others as candidates) as CSV")
@click.option("--table-out", default=None, type=click.Path(dir_okay=False),
              help="Path of the dumped score table (default: NAME.scores.csv)")
@indegree_option
@click.pass_context
def score(ctx, network, data, ess, dump_table, table_out, max_indegree):
    """Print the total BDeu score of a network structure"""
    variables, dag = load_structure(network)
    dataset = load_dataset(data, variables)
    scorer = BdeuScorer(dataset, _scoring(ess))
    if dump_table is not None:
        (v,) = _resolve_names(dataset, [dump_table], "--dump-table")
        table = build_score_table(v, NodeSubset.full(dataset.n).remove(v), dataset, max_indegree=max_indegree, scorer=scorer)
        rows = "".join(f"{mask},{value!r}\n" for mask, value in table.rows())
        Path(table_out or f"{dump_table}.scores.csv").write_text("parents_mask,score\n" + rows)
    _emit(ctx, [ScoreResult(score=scorer.score_dag(dag), config=_resolved_config(ctx))])


@cli.command("learn-exact")
@click.option("--data", required=True, type=existing_file, help="CSV dataset")
@indegree_option
@ess_option
@click.pass_context
def learn_exact(ctx, data, max_indegree, ess):
    """Globally optimal DAG by dynamic programming (at most 25 variables)"""
    dataset = load_dataset(data)
    if dataset.n > settings.exact_hard_cap:
        raise ConfigurationError(
            f"exact search supports at most {settings.exact_hard_cap} variables, the dataset has {dataset.n}"
        )
    result = optimal_network(
        NodeSubset.full(dataset.n), dataset, _scoring(ess), max_indegree, exact_limit=settings.exact_hard_cap
    )
    _emit(ctx, [StructureResult(
        arcs=named_pairs(result.dag.arcs, dataset.names), score=result.score,
        inexact=result.inexact, config=_resolved_config(ctx),
    )])


@cli.command("learn-greedy")
@click.option("--data", required=True, type=existing_file, help="CSV dataset")
@tabu_options
@indegree_option
@ess_option
@click.option("--skeleton", default=None, type=existing_file,
              help="JSON list of [name, name] pairs; arcs may only be added on these pairs")
@click.option("--restarts", type=click.IntRange(min=0), default=0, show_default=True,
              help="Perturb-and-reclimb rounds after convergence")
@click.pass_context
def learn_greedy(ctx, data, tabu, patience, max_indegree, ess, skeleton, restarts):
    """TABU hill-climbing from the empty DAG"""
    dataset = load_dataset(data)
    constraint = None
    if skeleton is not None:
        constraint = EdgeConstraint.from_edges(load_name_pairs(skeleton, dataset.names))
    params = GreedyParams(
        tabu_capacity=tabu, patience=patience, max_indegree=max_indegree, seed=ctx.obj.seed, restarts=restarts
    )
    scorer = BdeuScorer(dataset, _scoring(ess))
    dag = greedy_search(dataset, params, constraint, scorer=scorer)
    _emit(ctx, [StructureResult(
        arcs=named_pairs(dag.arcs, dataset.names), score=scorer.score_dag(dag), config=_resolved_config(ctx),
    )])


@cli.command("learn-local")
@click.option("--data", required=True, type=existing_file, help="CSV dataset")
@click.option("--target", "targets", multiple=True, help="Target variable name (repeatable)")
@click.option("--all-targets", is_flag=True, help="Learn every variable's neighbors and spouses")
@ess_option
@indegree_option
@exact_limit_option
@click.option("--visit-order", type=click.Choice([order.value for order in VisitOrder]),
              default=VisitOrder.ASCENDING_INDEX.value, show_default=True,
              help="Order in which candidate nodes are visited")
@click.pass_context
def learn_local(ctx, data, targets, all_targets, ess, max_indegree, exact_limit, visit_order):
    """Neighbors, spouses and Markov blanket of one or more targets (one JSON line each)"""
    if bool(targets) == all_targets:
        raise click.UsageError("give either --target (one or more) or --all-targets")
    dataset = load_dataset(data)
    config = SllConfig(
        scoring=_scoring(ess), max_indegree=max_indegree, exact_limit=exact_limit, visit_order=VisitOrder(visit_order)
    )
    learner = LocalLearner(dataset, config)
    if all_targets:
        results = [r for _, r in sorted(learner.all_blankets(ctx.obj.threads).items())]
    else:
        results = [learner.markov_blanket(t) for t in _resolve_names(dataset, targets, "--target")]

    names = dataset.names
    echoed = _resolved_config(ctx)
    _emit(ctx, [
        BlanketReport(
            target=names[r.target],
            neighbors=named(r.neighbors, names),
            spouses=named(r.spouses, names),
            blanket=named(r.blanket, names),
            inexact=r.inexact,
            config=echoed,
        )
        for r in results
    ])


@cli.command("learn-global")
@click.option("--data", required=True, type=existing_file, help="CSV dataset")
@click.option("--method", required=True, type=click.Choice(METHODS), help="Construction method")
@ess_option
@indegree_option
@exact_limit_option
@tabu_options
@click.pass_context
def learn_global_command(ctx, data, method, ess, max_indegree, exact_limit, tabu, patience):
    """Learn a full DAG with SLL+C, SLL+G or plain TABU search"""
    dataset = load_dataset(data)
    config = SllConfig(scoring=_scoring(ess), max_indegree=max_indegree, exact_limit=exact_limit)
    greedy = GreedyParams(tabu_capacity=tabu, patience=patience, max_indegree=max_indegree, seed=ctx.obj.seed)
    result = learn_global(dataset, method, config, greedy, threads=ctx.obj.threads)
    cpdag = dag_to_cpdag(result.dag)
    names = dataset.names
    _emit(ctx, [GlobalResult(
        arcs=named_pairs(result.dag.arcs, names),
        cpdag=CpdagPayload(
            directed=named_pairs(cpdag.directed, names), undirected=named_pairs(cpdag.undirected, names)
        ),
        score=BdeuScorer(dataset, config.scoring).score_dag(result.dag),
        inexact=result.inexact,
        config=_resolved_config(ctx),
    )])


@cli.command()
@click.option("--network", required=True, type=existing_file, help="Network JSON with CPTs")
@click.option("-m", "--rows", "rows", required=True, type=click.IntRange(min=0), help="Number of rows to draw")
@click.option("--seed", "sample_seed", type=int, default=None, help="Sampling seed (default: the global --seed)")
@click.option("-o", "--out", "out", required=True, type=click.Path(dir_okay=False), help="CSV file to write")
@click.pass_context
def sample(ctx, network, rows, sample_seed, out):
    """Forward-sample a dataset from a network"""
    if sample_seed is None:
        ctx.params["sample_seed"] = sample_seed = ctx.obj.seed
    bn = load_network(network)
    save_dataset(forward_sample(bn, rows, sample_seed), out)
    _emit(ctx, [SampleResult(rows=rows, output=out, config=_resolved_config(ctx))])


@cli.command()
@click.option("--truth", required=True, type=existing_file, help="True network JSON")
@click.option("--learned", required=True, type=existing_file, help="Learned arcs: [[parent, child], ...] by name")
@click.option("--data", required=True, type=existing_file, help="CSV dataset used for scoring")
@ess_option
@click.pass_context
def evaluate(ctx, truth, learned, data, ess):
    """Compare a learned DAG against the true network"""
    variables, truth_dag = load_structure(truth)
    dataset = load_dataset(data, variables)
    learned_dag = load_learned_dag(learned, dataset.names)
    metrics = compare_structures(learned_dag, truth_dag, dataset, _scoring(ess))
    _emit(ctx, [EvaluationResult(**metrics, config=_resolved_config(ctx))])


@cli.command()
@click.option("--spec", "spec_path", required=True, type=existing_file, help="Benchmark spec JSON")
@click.option("-o", "--out", "out", required=True, type=click.Path(file_okay=False), help="Report directory")
@click.option("--methods", default=None, help=f"Comma-separated subset of {', '.join(BENCH_METHODS)}")
@click.option("--plot", is_flag=True, help="Also render mean +/- std charts per metric as SVG")
@click.pass_context
def bench(ctx, spec_path, out, methods, plot):
    """Run the benchmark protocol and write raw cells (CSV) plus aggregates (JSON)"""
    spec = BenchmarkSpec.model_validate_json(Path(spec_path).read_text())
    if spec.network is not None and not Path(spec.network).is_absolute():
        spec = spec.model_copy(update={"network": str(Path(spec_path).parent / spec.network)})
    chosen = [m.strip() for m in methods.split(",") if m.strip()] if methods else None
    report = run_benchmark(spec, chosen, threads=ctx.obj.threads)
    written = write_report(report, Path(out))
    plots = [str(p) for p in plot_report(written[0], Path(out))] if plot else None
    _emit(ctx, [BenchResult(
        report_dir=out,
        cells=len(report.cells),
        failed=sum(cell.failed for cell in report.cells),
        plots=plots,
        config=_resolved_config(ctx),
    )])


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and map failures to exit codes: 1 for usage errors, 2 for data/format errors."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name=settings.app_name,
                      standalone_mode=False)
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except (DataFormatError, ConfigurationError, ValidationError, OSError) as exc:
        click.echo(f"Error: {exc}", err=True)
        return 2
    except ArgumentError as exc:
        click.echo(f"Error: {exc}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    return rv if isinstance(rv, int) else 0


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
