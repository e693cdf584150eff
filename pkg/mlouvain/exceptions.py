# mlouvain/exceptions.py
# Error hierarchy shared by the graph, clustering, generator and evaluation apps

import re


class MultiplexError(ValueError):
    """Base class for every data or configuration error raised by the library.

    Each error exposes a stable upper-case ``code`` derived from its class
    name (``GraphFormatError`` -> ``GRAPH_FORMAT_ERROR``) so that command-line
    diagnostics stay consistent across apps.
    """

    @property
    def code(self) -> str:
        name = re.sub(r"(?<!^)(?=[A-Z])", "_", self.__class__.__name__)
        return name.upper()


class GraphFormatError(MultiplexError):
    """A graph, partition or feature file could not be parsed."""

    def __init__(self, message: str, path=None, line_no: int | None = None):
        self.path = path
        self.line_no = line_no
        location = ""
        if path is not None:
            location = f"{path}:{line_no}: " if line_no is not None else f"{path}: "
        super().__init__(f"{location}{message}")


class GraphConstructionError(MultiplexError):
    """Layer data violates a multiplex graph invariant."""


class FeatureMatrixError(MultiplexError):
    """Feature matrix cannot be turned into a kNN layer."""


class PartitionError(MultiplexError):
    """Invalid community labels, mappings or community ids."""


class ConfigurationError(MultiplexError):
    """Inconsistent solver, preset or experiment configuration."""


class GeneratorError(MultiplexError):
    """A synthetic benchmark instance could not be sampled."""


class ParetoInvariantError(MultiplexError):
    """The Pareto list lost mutual non-dominance or exceeded its capacity."""


class MetricsError(MultiplexError):
    """Scores cannot be computed for the given inputs."""
