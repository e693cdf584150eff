# evaluation/management/commands/bench_lfr.py
# Multilayer LFR sweep over the mixing-parameter grid

from evaluation.experiments import ExperimentKind
from evaluation.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Run an LFR recipe and write its CSV report"

    kind = ExperimentKind.LFR
