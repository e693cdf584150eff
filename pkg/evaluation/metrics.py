# evaluation/metrics.py
# Accuracy under optimal label matching, NMI and performance ratios

import numpy as np
import pandas as pd
from scipy.optimize import linear_sum_assignment
from sklearn.metrics.cluster import contingency_matrix, normalized_mutual_info_score

from mlouvain.exceptions import MetricsError
from networks.graph import Partition

NMI_AVERAGES = ("geometric", "arithmetic")


def _labels(partition) -> np.ndarray:
    if isinstance(partition, Partition):
        return partition.labels
    return np.asarray(partition)


def _check_sizes(pred, truth):
    if pred.size != truth.size:
        raise MetricsError(f"partitions cover {pred.size} and {truth.size} nodes")


def confusion_matrix(pred, truth) -> np.ndarray:
    """Square ``counts[a, b]`` of nodes with predicted ``a`` and true ``b``, zero-padded."""
    pred, truth = _labels(pred), _labels(truth)
    _check_sizes(pred, truth)
    counts = contingency_matrix(pred, truth)
    size = max(counts.shape)
    padded = np.zeros((size, size), dtype=np.int64)
    padded[: counts.shape[0], : counts.shape[1]] = counts
    return padded


def accuracy(pred, truth) -> float:
    """Share of nodes in the correct community under the best one-to-one relabeling."""
    counts = confusion_matrix(pred, truth)
    rows, cols = linear_sum_assignment(counts, maximize=True)
    return float(counts[rows, cols].sum() / counts.sum())


def nmi(pred, truth, average: str = "geometric") -> float:
    """Normalized mutual information; 0 when either side has a single community."""
    if average not in NMI_AVERAGES:
        raise MetricsError(f"unknown NMI average {average!r}")
    pred, truth = _labels(pred), _labels(truth)
    _check_sizes(pred, truth)
    if np.unique(pred).size < 2 or np.unique(truth).size < 2:
        return 0.0
    score = normalized_mutual_info_score(truth, pred, average_method=average)
    return float(min(max(score, 0.0), 1.0))


def performance_ratios(
    scores: pd.DataFrame,
    metrics=("accuracy", "nmi"),
    method: str = "method",
    dataset: str = "dataset",
) -> pd.DataFrame:
    """Average over datasets of each method's score divided by the best score on that dataset.

    ``scores`` holds one row per ``(method, dataset)`` cell. Returns one row
    per method with a ``rho_<metric>`` column per metric.

    Raises:
        MetricsError: a cell is missing or duplicated, or a dataset's best score is 0.

    """
    if scores.duplicated([method, dataset]).any():
        raise MetricsError("duplicate (method, dataset) cells")
    methods = scores[method].unique()
    datasets = scores[dataset].unique()
    if len(scores) != len(methods) * len(datasets):
        raise MetricsError("every method needs a score on every dataset")

    result = pd.DataFrame(index=pd.Index(sorted(methods), name=method))
    for metric in metrics:
        if scores[metric].isna().any():
            raise MetricsError(f"missing {metric} score")
        best = scores.groupby(dataset)[metric].transform("max")
        if (best <= 0).any():
            zero = scores.loc[best <= 0, dataset].iloc[0]
            raise MetricsError(f"best {metric} on {zero} is 0")
        ratio = scores[metric] / best
        result[f"rho_{metric}"] = ratio.groupby(scores[method]).mean()
    return result.reset_index()
