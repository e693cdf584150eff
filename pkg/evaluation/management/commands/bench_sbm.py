# evaluation/management/commands/bench_sbm.py
# Multilayer SBM sweep over the p/q grid

from evaluation.experiments import ExperimentKind
from evaluation.management.base import ExperimentCommand


class Command(ExperimentCommand):
    help = "Run a stochastic block model recipe and write its CSV report"

    kind = ExperimentKind.SBM
