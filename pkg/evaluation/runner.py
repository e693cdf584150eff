# evaluation/runner.py
# Experiment execution: instances, solver runs and the worker pool

import logging
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path

from django.conf import settings

from benchmarks.erdos_renyi import gen_er
from benchmarks.lfr import gen_lfr_multiplex
from benchmarks.sbm import gen_sbm
from benchmarks.stacking import stack_layers
from clustering import solver
from clustering.presets import LIST_METHODS, preset, solver_defaults
from mlouvain.exceptions import MetricsError
from mlouvain.instrumentation import log_call
from mlouvain.seeding import derive_rng, derive_seed
from networks.graph import MultiplexGraph, Partition
from networks.io import EDGE_LIST, load_features, load_multiplex, load_partition
from networks.knn import build_knn_layer
from networks.operations import flatten

from .experiments import ExperimentConfig, ExperimentKind, RealSetting
from .metrics import accuracy, nmi

logger = logging.getLogger(__name__)

TRUTH_FILE = "truth.txt"
LAYERS_FILE = "layers.edges"
FEATURES_GLOB = "features*.csv"


@dataclass(frozen=True)
class ResultRow:
    """Scores of one solver run on one instance."""

    experiment: str
    dataset: str
    setting: str
    param_name: str
    param_value: float
    method: str
    h: int
    gamma: float | None
    sample: int
    run: int
    sample_seed: int
    run_seed: int
    accuracy: float | None
    nmi: float | None
    f: float
    q: str
    communities: int
    outer_iterations: int
    wall_ms: float | None = None
    kind: str = "run"


@dataclass(frozen=True)
class Dataset:
    name: str
    graph: MultiplexGraph
    truth: Partition


@dataclass(frozen=True)
class Task:
    config: ExperimentConfig
    point: int
    sample: int
    solver_options: dict
    dataset: Dataset | None = None


def format_q(q) -> str:
    return ";".join(repr(float(value)) for value in q)


@log_call
def load_dataset(directory, knn: int | None = None) -> Dataset:
    """Layers and ground truth of a dataset directory.

    The directory holds ``truth.txt`` and any of ``layers.edges`` (an edge
    list) and ``features*.csv`` (one kNN layer per file, in name order).

    Raises:
        MetricsError: ``truth.txt`` is missing.
        GraphFormatError: a layer file cannot be parsed.

    """
    directory = Path(directory)
    truth_path = directory / TRUTH_FILE
    if not truth_path.is_file():
        raise MetricsError(f"{directory}: no {TRUTH_FILE}, cannot score partitions")
    truth = load_partition(truth_path)

    graphs = []
    layers_path = directory / LAYERS_FILE
    if layers_path.is_file():
        graphs.append(load_multiplex(layers_path, EDGE_LIST, num_nodes=truth.n))
    if knn is None:
        knn = getattr(settings, "KNN_NEIGHBORS", 10)
    for features_path in sorted(directory.glob(FEATURES_GLOB)):
        graphs.append(build_knn_layer(load_features(features_path), knn))
    if not graphs:
        raise MetricsError(f"{directory}: neither {LAYERS_FILE} nor {FEATURES_GLOB} found")
    graph = stack_layers(graphs)
    logger.info(f"Loaded dataset {directory.name}: n={graph.n}, k={graph.k}")
    return Dataset(directory.name, graph, truth)


def build_instance(config: ExperimentConfig, point: int, sample: int, dataset: Dataset | None = None):
    """Graph and ground truth of ``(point, sample)``, from its own seed.

    Returns:
        tuple: ``(graph, truth, sample_seed)``.

    """
    sample_seed = derive_seed(config.seed, point, sample)
    if config.kind is ExperimentKind.SBM:
        graph, truth = gen_sbm(config.instance_spec(point, sample_seed))
        return graph, truth, sample_seed

    if config.kind is ExperimentKind.LFR:
        gen = config.generator
        graph, truth = gen_lfr_multiplex(
            config.instance_spec(point, sample_seed), gen.informative_layers, gen.noisy_layers
        )
        return graph, truth, sample_seed

    setting = config.generator.setting
    if setting is RealSetting.INFORMATIVE:
        return dataset.graph, dataset.truth, sample_seed
    noise = gen_er(dataset.graph.n, config.points[point], derive_rng(sample_seed))
    base = flatten(dataset.graph) if setting is RealSetting.FLATTEN_PLUS_NOISE else dataset.graph
    return stack_layers([base, noise]), dataset.truth, sample_seed


def run_task(task: Task) -> list[ResultRow]:
    """Sample one instance and evaluate every method, gamma and run on it."""
    config = task.config
    graph, truth, sample_seed = build_instance(config, task.point, task.sample, task.dataset)
    dataset = task.dataset.name if task.dataset else config.kind.value
    setting = config.generator.setting.value if config.kind is ExperimentKind.REAL else (
        "noisy" if config.noisy else "informative"
    )
    rows = []
    for spec in config.methods:
        ordering = spec.ordering or config.default_ordering
        for gamma in spec.gamma_values(config.gammas):
            for run in range(config.runs):
                run_seed = derive_seed(config.seed, task.point, task.sample, run)
                cfg = preset(
                    spec.method,
                    h=spec.h if spec.method in LIST_METHODS else None,
                    gamma=gamma,
                    ordering=ordering,
                    seed=run_seed,
                    **task.solver_options,
                )
                started = time.perf_counter()
                result = solver.run(graph, cfg)
                elapsed = (time.perf_counter() - started) * 1000.0
                rows.append(
                    ResultRow(
                        experiment=config.name,
                        dataset=dataset,
                        setting=setting,
                        param_name=config.parameter,
                        param_value=config.points[task.point],
                        method=spec.label,
                        h=spec.h,
                        gamma=gamma,
                        sample=task.sample,
                        run=run,
                        sample_seed=sample_seed,
                        run_seed=run_seed,
                        accuracy=accuracy(result.partition, truth),
                        nmi=nmi(result.partition, truth, config.nmi_average),
                        f=result.f,
                        q=format_q(result.q),
                        communities=result.num_communities,
                        outer_iterations=result.outer_iterations,
                        wall_ms=elapsed if config.record_timings else None,
                    )
                )
    return rows


def plan_tasks(config: ExperimentConfig, datasets=()) -> list[Task]:
    options = solver_defaults()
    sources = list(datasets) if config.kind is ExperimentKind.REAL else [None]
    return [
        Task(config, point, sample, options, dataset)
        for dataset in sources
        for point in range(len(config.points))
        for sample in range(config.samples)
    ]


@log_call
def run_experiment(config: ExperimentConfig, datasets=None) -> list[ResultRow]:
    """Evaluate every task of ``config``, on ``config.workers`` processes.

    Rows come back in completion order; the report sorts them.
    """
    if config.kind is ExperimentKind.REAL and datasets is None:
        datasets = [load_dataset(path, config.generator.knn) for path in config.generator.datasets]
    tasks = plan_tasks(config, datasets or ())
    logger.info(f"Experiment {config.name}: {len(tasks)} task(s) on {config.workers} worker(s)")

    rows = []
    if config.workers == 1:
        for done, task in enumerate(tasks, start=1):
            rows.extend(run_task(task))
            logger.debug(f"Task {done}/{len(tasks)} finished")
        return rows

    with ProcessPoolExecutor(max_workers=config.workers) as executor:
        futures = {executor.submit(run_task, task): task for task in tasks}
        for done, future in enumerate(as_completed(futures), start=1):
            task = futures[future]
            rows.extend(future.result())
            logger.debug(f"Task {done}/{len(tasks)} (point {task.point}, sample {task.sample}) finished")
    return rows
