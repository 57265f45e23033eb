"""Synthetic labeled corpora for desk-scale experiments.

Gaussian blobs with unit variance sit on scaled coordinate axes so that every
pair of centers is exactly ``separation`` apart.  An optional fraction of
uniform box noise is mixed in, labeled by nearest center, to stress
neighborhood-graph construction the way stray documents stress a real corpus.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError
from .vectorstore import VectorDataset


def make_blob_dataset(
    n: int = 600,
    dim: int = 16,
    blobs: int = 3,
    separation: float = 6.0,
    seed: int = 0,
    outlier_fraction: float = 0.0,
    outlier_pad: float = 1.0,
    name: str | None = None,
) -> VectorDataset:
    """Labeled mixture of ``blobs`` unit-variance Gaussians plus box noise.

    ``separation`` is the distance between any two blob centers in units of
    the blob standard deviation.  ``outlier_fraction`` of the points are
    drawn uniformly from the per-dimension bounding box of the centers,
    padded by ``outlier_pad`` on each side, and labeled by nearest center.
    """
    if n < blobs:
        raise ParameterError(f"need at least one point per blob ({blobs}), got n={n}")
    if blobs < 1 or dim < 1:
        raise ParameterError("blobs and dim must be positive")
    if blobs > dim:
        raise ParameterError(
            f"axis-aligned centers need dim >= blobs, got dim={dim} < {blobs}"
        )
    if not 0.0 <= outlier_fraction < 1.0:
        raise ParameterError(f"outlier_fraction must be in [0, 1), got {outlier_fraction}")
    if separation <= 0:
        raise ParameterError(f"separation must be positive, got {separation}")

    rng = np.random.default_rng(seed)
    centers = np.zeros((blobs, dim))
    for i in range(blobs):
        centers[i, i] = separation / np.sqrt(2.0)

    num_outliers = int(round(n * outlier_fraction))
    num_core = n - num_outliers
    sizes = np.full(blobs, num_core // blobs)
    sizes[: num_core % blobs] += 1

    points = []
    labels = []
    for i, size in enumerate(sizes):
        points.append(centers[i] + rng.standard_normal((size, dim)))
        labels.extend([i] * size)

    if num_outliers:
        lo = centers.min(axis=0) - outlier_pad
        hi = centers.max(axis=0) + outlier_pad
        noise = rng.uniform(lo, hi, size=(num_outliers, dim))
        d2 = ((noise[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        points.append(noise)
        labels.extend(d2.argmin(axis=1).tolist())

    vectors = np.concatenate(points).astype(np.float32)
    labels = np.asarray(labels)
    order = rng.permutation(n)
    return VectorDataset(
        vectors=vectors[order],
        labels=[f"blob{labels[i]}" for i in order],
        name=name or f"blobs{blobs}-n{n}-d{dim}",
    )
