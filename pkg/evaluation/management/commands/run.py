# evaluation/management/commands/run.py
# Single solver run on an edge-list file

import time
from pathlib import Path

from clustering import solver
from clustering.presets import parse_method, preset, solver_defaults
from evaluation.management.base import MultiplexCommand, ordering_choices
from evaluation.metrics import accuracy, nmi
from evaluation.report import runs_frame
from evaluation.runner import ResultRow, format_q
from mlouvain.exceptions import ConfigurationError
from networks.io import load_multiplex, load_partition, save_partition


class Command(MultiplexCommand):
    help = "Run one method on a multiplex edge list and print its result row as CSV"

    def add_arguments(self, parser):
        parser.add_argument("graph", help="Edge list with 'layer src dst [weight]' lines")
        parser.add_argument("--truth", help="Ground-truth labels, one per line")
        parser.add_argument("--method", default="GL", help="Method label, e.g. GL, EVM, MVM2")
        parser.add_argument("--h", type=int, help="Pareto-list length (MA, MVM, MVP)")
        parser.add_argument("--gamma", type=float, help="Variance weight in (0, 1)")
        parser.add_argument("--ordering", choices=ordering_choices(), default="community_size")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--partition", help="Write the final labels to this file")
        parser.add_argument(
            "--nmi-average", choices=["geometric", "arithmetic"], default="geometric"
        )

    def handle(self, *args, **options):
        method, h = parse_method(options["method"])
        if options["h"] is not None:
            if h is not None and h != options["h"]:
                raise ConfigurationError(f"--h {options['h']} contradicts method {options['method']}")
            h = options["h"]

        graph = load_multiplex(options["graph"])
        truth = load_partition(options["truth"], num_nodes=graph.n) if options["truth"] else None

        cfg = preset(
            method,
            h=h,
            gamma=options["gamma"],
            ordering=options["ordering"],
            seed=options["seed"],
            **solver_defaults(),
        )
        started = time.perf_counter()
        result = solver.run(graph, cfg)
        elapsed = (time.perf_counter() - started) * 1000.0

        if options["partition"]:
            save_partition(result.partition, options["partition"])

        row = ResultRow(
            experiment="run",
            dataset=Path(options["graph"]).stem,
            setting="single",
            param_name="",
            param_value=float("nan"),
            method=options["method"].upper(),
            h=cfg.quality.h,
            gamma=options["gamma"],
            sample=0,
            run=0,
            sample_seed=0,
            run_seed=options["seed"],
            accuracy=accuracy(result.partition, truth) if truth is not None else None,
            nmi=nmi(result.partition, truth, options["nmi_average"]) if truth is not None else None,
            f=result.f,
            q=format_q(result.q),
            communities=result.num_communities,
            outer_iterations=result.outer_iterations,
            wall_ms=elapsed,
        )
        self.write_csv(runs_frame([row]), "-")
