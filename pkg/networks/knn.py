# networks/knn.py
# Symmetrized k-nearest-neighbor layers from node feature matrices

import logging

import numpy as np
import scipy.sparse as sp

from mlouvain.exceptions import FeatureMatrixError

from .graph import MultiplexGraph

logger = logging.getLogger(__name__)

# Correlations are compared after rounding so that ties computed through
# different summation orders stay ties.
CORRELATION_DECIMALS = 12


def pearson_correlation(features: np.ndarray) -> np.ndarray:
    """Row-wise Pearson correlation matrix; rejects constant rows."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2:
        raise FeatureMatrixError("feature matrix must be two-dimensional")
    constant = np.flatnonzero(np.ptp(features, axis=1) == 0)
    if constant.size:
        raise FeatureMatrixError(
            f"feature row {int(constant[0])} has zero variance; correlation undefined"
        )
    return np.corrcoef(features)


def build_knn_layer(features: np.ndarray, knn: int) -> MultiplexGraph:
    """Build the unweighted symmetrized kNN graph of ``features``.

    ``u`` and ``v`` are joined when ``v`` is among the ``knn`` rows most
    correlated with ``u`` or vice versa. Ties are broken by the lowest node
    id and a row is never its own neighbor.

    Args:
        features: ``(n, d)`` matrix, one row per node.
        knn: Neighbors per node, ``1 <= knn < n``.

    Returns:
        MultiplexGraph: Single-layer graph without self-loops.

    Raises:
        FeatureMatrixError: Constant row, or ``knn`` out of range.

    """
    n = np.asarray(features).shape[0]
    if knn < 1 or knn >= n:
        raise FeatureMatrixError(f"knn must satisfy 1 <= knn < n, got knn={knn}, n={n}")

    correlation = np.round(pearson_correlation(features), CORRELATION_DECIMALS)
    np.fill_diagonal(correlation, -np.inf)
    # stable sort on the negated values keeps lower ids first among equals
    nearest = np.argsort(-correlation, axis=1, kind="stable")[:, :knn]

    rows = np.repeat(np.arange(n), knn)
    cols = nearest.ravel()
    directed = sp.csr_matrix((np.ones(rows.size), (rows, cols)), shape=(n, n))
    symmetric = directed.maximum(directed.T)
    logger.debug(f"kNN layer: n={n}, knn={knn}, edges={symmetric.nnz // 2}")
    return MultiplexGraph([symmetric])
