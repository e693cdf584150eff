# clustering/objectives.py
# Scalar quality functions over a vector of layer modularities

import numpy as np

from .config import QualityConfig, Variant


def mean_modularity(q) -> float:
    """Average layer modularity M_Q."""
    return float(np.mean(q))


def variance_modularity(q) -> float:
    """Sample variance V_Q of the layer modularities (divisor k-1; 0 when k=1)."""
    q = np.asarray(q, dtype=np.float64)
    if q.size < 2:
        return 0.0
    return float(np.var(q, ddof=1))


def quality(q, cfg: QualityConfig) -> float:
    """Scalar quality F of ``q``: M_Q, (1-g)M_Q - gV_Q or (1-g)M_Q + gV_Q."""
    mean = mean_modularity(q)
    if cfg.variant is Variant.MEAN:
        return mean
    variance = variance_modularity(q)
    if cfg.variant is Variant.VAR_MINUS:
        return (1.0 - cfg.gamma) * mean - cfg.gamma * variance
    return (1.0 - cfg.gamma) * mean + cfg.gamma * variance


def variance_increments(q: np.ndarray, dq: np.ndarray):
    """Return ``(dM, V_dQ, R_Q)`` for one or many gain vectors.

    ``dq`` is ``(k,)`` or ``(c, k)``. ``R_Q = V_dQ + 2/(k-1) (Q - M_Q)^T (dQ - dM)``
    equals ``V_{Q+dQ} - V_Q``.
    """
    dq = np.asarray(dq, dtype=np.float64)
    k = dq.shape[-1]
    d_mean = dq.mean(axis=-1)
    if k < 2:
        zeros = np.zeros_like(d_mean)
        return d_mean, zeros, zeros
    deviation = dq - d_mean[..., None]
    v_dq = (deviation**2).sum(axis=-1) / (k - 1)
    r_q = v_dq + 2.0 / (k - 1) * (deviation @ (q - q.mean()))
    return d_mean, v_dq, r_q


def quality_gain(d_mean, r_q, cfg: QualityConfig):
    """dF from dM and R_Q for the configured variant."""
    if cfg.variant is Variant.MEAN:
        return d_mean
    if cfg.variant is Variant.VAR_MINUS:
        return (1.0 - cfg.gamma) * d_mean - cfg.gamma * r_q
    return (1.0 - cfg.gamma) * d_mean + cfg.gamma * r_q
