"""Clustering agreement scores between predicted clusters and class labels.

Homogeneity penalizes clusters that mix classes, completeness penalizes
classes split across clusters, and the V-measure is their weighted harmonic
mean.  All entropies are natural-log.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError


def contingency_table(true_labels, pred_labels) -> np.ndarray:
    """Dense count matrix with one row per class and one column per cluster."""
    true_labels = np.asarray(true_labels)
    pred_labels = np.asarray(pred_labels)
    if true_labels.shape != pred_labels.shape or true_labels.ndim != 1:
        raise ParameterError("label arrays must be 1-D and the same length")
    if true_labels.size == 0:
        raise ParameterError("cannot score empty label arrays")
    _, ti = np.unique(true_labels, return_inverse=True)
    _, pi = np.unique(pred_labels, return_inverse=True)
    table = np.zeros((ti.max() + 1, pi.max() + 1), dtype=np.int64)
    np.add.at(table, (ti, pi), 1)
    return table


def _entropy(counts: np.ndarray) -> float:
    total = counts.sum()
    p = counts[counts > 0] / total
    return float(-(p * np.log(p)).sum())


def _conditional_entropy(table: np.ndarray) -> float:
    """H(rows | cols) from a contingency table."""
    n = table.sum()
    col = table.sum(axis=0)
    h = 0.0
    for j in range(table.shape[1]):
        if col[j] == 0:
            continue
        p = table[table[:, j] > 0, j] / col[j]
        h -= (col[j] / n) * (p * np.log(p)).sum()
    return float(h)


def homogeneity_completeness(true_labels, pred_labels) -> tuple[float, float]:
    table = contingency_table(true_labels, pred_labels)
    h_classes = _entropy(table.sum(axis=1))
    h_clusters = _entropy(table.sum(axis=0))
    if h_classes == 0.0:
        homogeneity = 1.0
    else:
        homogeneity = 1.0 - _conditional_entropy(table) / h_classes
    if h_clusters == 0.0:
        completeness = 1.0
    else:
        completeness = 1.0 - _conditional_entropy(table.T) / h_clusters
    return homogeneity, completeness


def v_measure(true_labels, pred_labels, beta: float = 1.0) -> float:
    """Weighted harmonic mean of homogeneity and completeness.

    ``beta`` > 1 weights completeness more strongly; beta < 1 favors
    homogeneity.  Returns 0 when both components are 0.
    """
    if beta < 0:
        raise ParameterError(f"beta must be nonnegative, got {beta}")
    h, c = homogeneity_completeness(true_labels, pred_labels)
    denom = beta * h + c
    if denom == 0.0:
        return 0.0
    return (1.0 + beta) * h * c / denom
