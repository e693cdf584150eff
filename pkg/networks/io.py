# networks/io.py
# Edge-list, ground-truth and feature-matrix file formats

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from mlouvain.exceptions import GraphConstructionError, GraphFormatError
from mlouvain.instrumentation import log_call

from .graph import MultiplexGraph, Partition

logger = logging.getLogger(__name__)

EDGE_LIST = "edge-list"
NODES_DIRECTIVE = "# nodes="


def _parse_edge_line(line: str, path, line_no: int):
    fields = line.split()
    if len(fields) not in (3, 4):
        raise GraphFormatError(
            f"expected 'layer src dst [weight]', got {len(fields)} fields",
            path=path,
            line_no=line_no,
        )
    try:
        layer, src, dst = (int(value) for value in fields[:3])
        weight = float(fields[3]) if len(fields) == 4 else 1.0
    except ValueError as e:
        raise GraphFormatError(f"unparsable value ({e})", path=path, line_no=line_no) from e
    if min(layer, src, dst) < 0:
        raise GraphFormatError("ids must be non-negative", path=path, line_no=line_no)
    if weight < 0:
        raise GraphConstructionError(f"{path}:{line_no}: negative weight {weight}")
    if not np.isfinite(weight):
        raise GraphFormatError("weight must be finite", path=path, line_no=line_no)
    return layer, src, dst, weight


@log_call
def load_multiplex(path, format: str = EDGE_LIST, num_nodes: int | None = None) -> MultiplexGraph:
    """Load a multiplex from a ``layer src dst [weight]`` edge list.

    Args:
        path: File to read; ``#`` starts a comment.
        format: Only ``"edge-list"`` is supported.
        num_nodes: Node count override, for inputs whose highest ids are isolated.

    Returns:
        MultiplexGraph: Graph with symmetrized layers and unit node sizes.

    Raises:
        GraphFormatError: Malformed or duplicate line, with the line number.
        GraphConstructionError: Negative weight or a layer without edges.

    """
    if format != EDGE_LIST:
        raise GraphFormatError(f"unsupported graph format '{format}'", path=path)

    path = Path(path)
    declared = None
    seen: dict[tuple[int, int, int], int] = {}
    records = []
    with path.open(encoding="ascii") as handle:
        for line_no, raw in enumerate(handle, start=1):
            if raw.startswith(NODES_DIRECTIVE):
                try:
                    declared = int(raw[len(NODES_DIRECTIVE) :])
                except ValueError as e:
                    raise GraphFormatError(
                        f"bad node count directive ({e})", path=path, line_no=line_no
                    ) from e
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            layer, src, dst, weight = _parse_edge_line(line, path, line_no)
            key = (layer, min(src, dst), max(src, dst))
            if key in seen:
                raise GraphFormatError(
                    f"duplicate edge {src}-{dst} in layer {layer} (first on line {seen[key]})",
                    path=path,
                    line_no=line_no,
                )
            seen[key] = line_no
            records.append((layer, src, dst, weight))

    if not records:
        raise GraphConstructionError(f"{path}: no edges")

    n_layers = max(r[0] for r in records) + 1
    n = max(max(r[1], r[2]) for r in records) + 1
    num_nodes = num_nodes if num_nodes is not None else declared
    if num_nodes is not None:
        if num_nodes < n:
            raise GraphConstructionError(
                f"{path}: node id {n - 1} exceeds declared node count {num_nodes}"
            )
        n = num_nodes

    per_layer: list[list[tuple[int, int, float]]] = [[] for _ in range(n_layers)]
    for layer, src, dst, weight in records:
        per_layer[layer].append((src, dst, weight))
    for s, edges in enumerate(per_layer):
        if not edges or not any(w > 0 for _, _, w in edges):
            raise GraphConstructionError(f"empty layer {s}")

    graph = MultiplexGraph.from_edges(per_layer, n=n)
    logger.info(f"Loaded {graph} from {path}")
    return graph


def save_multiplex(graph: MultiplexGraph, path) -> Path:
    """Write ``graph`` as an edge list in canonical order (layer, src, dst).

    Weights are written with ``repr`` so that loading the file back yields
    bit-identical layers.
    """
    path = Path(path)
    with path.open("w", encoding="ascii") as handle:
        handle.write(f"{NODES_DIRECTIVE}{graph.n}\n")
        for s in range(graph.k):
            for i, j, w in graph.edges(s):
                handle.write(f"{s} {i} {j} {w!r}\n")
    return path


def load_partition(path, num_nodes: int | None = None) -> Partition:
    """Load one integer label per line (line index = node id)."""
    path = Path(path)
    labels = []
    with path.open(encoding="ascii") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                labels.append(int(line))
            except ValueError as e:
                raise GraphFormatError(
                    f"expected one integer label, got '{line}'", path=path, line_no=line_no
                ) from e
    if num_nodes is not None and len(labels) != num_nodes:
        raise GraphFormatError(
            f"{len(labels)} labels for a graph with {num_nodes} nodes", path=path
        )
    return Partition.from_labels(labels)


def save_partition(partition: Partition, path) -> Path:
    path = Path(path)
    path.write_text("".join(f"{label}\n" for label in partition.labels), encoding="ascii")
    return path


def load_features(path) -> np.ndarray:
    """Load a feature matrix from CSV, one row per node, no header."""
    path = Path(path)
    try:
        frame = pd.read_csv(path, header=None, comment="#", dtype=np.float64)
    except (ValueError, pd.errors.ParserError) as e:
        raise GraphFormatError(f"invalid feature matrix ({e})", path=path) from e
    if frame.empty:
        raise GraphFormatError("feature matrix has no rows", path=path)
    if frame.isna().any().any():
        raise GraphFormatError("feature matrix has missing values", path=path)
    return frame.to_numpy()

