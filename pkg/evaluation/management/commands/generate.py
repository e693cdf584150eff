# evaluation/management/commands/generate.py
# Write a sampled benchmark instance as layers.edges plus truth.txt

from pathlib import Path

from benchmarks.erdos_renyi import gen_er
from benchmarks.lfr import gen_lfr_multiplex
from benchmarks.sbm import gen_sbm
from benchmarks.specs import LfrSpec, SbmSpec
from benchmarks.stacking import stack_layers
from evaluation.management.base import MultiplexCommand
from evaluation.runner import LAYERS_FILE, TRUTH_FILE
from mlouvain.exceptions import ConfigurationError
from mlouvain.seeding import derive_rng
from networks.io import save_multiplex, save_partition


class Command(MultiplexCommand):
    help = "Sample an SBM, LFR or Erdos-Renyi multiplex into a dataset directory"

    def add_arguments(self, parser):
        parser.add_argument("kind", choices=["sbm", "lfr", "er"])
        parser.add_argument("output_dir", help="Directory for layers.edges and truth.txt")
        parser.add_argument("--seed", type=int, default=0)
        parser.add_argument("--layers", type=int, default=2, help="Informative (or ER) layers")
        parser.add_argument("--noisy-layers", type=int, default=0)

        sbm = parser.add_argument_group("sbm")
        sbm.add_argument("--sizes", type=int, nargs="+", default=[125, 125, 125, 125])
        sbm.add_argument("--p-in", type=float, default=0.1)
        sbm.add_argument("--ratio", type=float, default=3.0, help="p_in / p_out")
        sbm.add_argument("--p-noise", type=float, default=0.1)

        lfr = parser.add_argument_group("lfr")
        lfr.add_argument("--n", type=int, default=128)
        lfr.add_argument("--community-sizes", type=int, nargs="+", default=[32, 32, 32, 32])
        lfr.add_argument("--avg-degree", type=float, default=16.0)
        lfr.add_argument("--max-degree", type=int, default=32)
        lfr.add_argument("--mu", type=float, default=0.3)

        er = parser.add_argument_group("er")
        er.add_argument("--p", type=float, default=0.03, help="Edge probability")

    def handle(self, *args, **options):
        kind = options["kind"]
        if kind == "sbm":
            if options["ratio"] < 1.0:
                raise ConfigurationError(f"--ratio {options['ratio']} puts p_out above p_in")
            graph, truth = gen_sbm(
                SbmSpec(
                    sizes=tuple(options["sizes"]),
                    p_in=options["p_in"],
                    p_out=options["p_in"] / options["ratio"],
                    informative_layers=options["layers"],
                    noisy_layers=options["noisy_layers"],
                    p_noise=options["p_noise"],
                    seed=options["seed"],
                )
            )
        elif kind == "lfr":
            spec = LfrSpec(
                n=options["n"],
                community_sizes=tuple(options["community_sizes"]),
                avg_degree=options["avg_degree"],
                max_degree=options["max_degree"],
                mu=options["mu"],
                seed=options["seed"],
            )
            graph, truth = gen_lfr_multiplex(spec, options["layers"], options["noisy_layers"])
        else:
            graph = stack_layers(
                [
                    gen_er(options["n"], options["p"], derive_rng(options["seed"], s))
                    for s in range(options["layers"])
                ]
            )
            truth = None

        directory = Path(options["output_dir"])
        directory.mkdir(parents=True, exist_ok=True)
        save_multiplex(graph, directory / LAYERS_FILE)
        if truth is not None:
            save_partition(truth, directory / TRUTH_FILE)
        self.stdout.write(self.style.SUCCESS(f"Wrote {graph} to {directory}"))
