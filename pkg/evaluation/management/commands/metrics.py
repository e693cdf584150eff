# evaluation/management/commands/metrics.py
# Accuracy/NMI of a partition file, or performance ratios of a score table

import pandas as pd

from evaluation.management.base import MultiplexCommand
from evaluation.metrics import accuracy, nmi, performance_ratios
from mlouvain.exceptions import ConfigurationError
from networks.io import load_partition


class Command(MultiplexCommand):
    help = (
        "Score --partition against --truth, or turn a --scores CSV with "
        "method,dataset,accuracy,nmi columns into performance ratios"
    )

    def add_arguments(self, parser):
        parser.add_argument("--partition", help="Predicted labels, one per line")
        parser.add_argument("--truth", help="Ground-truth labels, one per line")
        parser.add_argument("--scores", help="CSV with one row per (method, dataset)")
        parser.add_argument(
            "--nmi-average", choices=["geometric", "arithmetic"], default="geometric"
        )

    def handle(self, *args, **options):
        if options["scores"]:
            if options["partition"] or options["truth"]:
                raise ConfigurationError("--scores excludes --partition and --truth")
            scores = pd.read_csv(options["scores"], comment="#")
            missing = {"method", "dataset", "accuracy", "nmi"} - set(scores.columns)
            if missing:
                raise ConfigurationError(f"{options['scores']}: missing column(s) {sorted(missing)}")
            ratios = performance_ratios(scores[["method", "dataset", "accuracy", "nmi"]])
            self.stdout.write(ratios.to_csv(index=False, lineterminator="\n"), ending="")
            return

        if not (options["partition"] and options["truth"]):
            raise ConfigurationError("give --partition and --truth, or --scores")
        truth = load_partition(options["truth"])
        pred = load_partition(options["partition"], num_nodes=truth.n)
        frame = pd.DataFrame(
            [
                {
                    "accuracy": accuracy(pred, truth),
                    "nmi": nmi(pred, truth, options["nmi_average"]),
                }
            ]
        )
        self.stdout.write(frame.to_csv(index=False, lineterminator="\n"), ending="")
