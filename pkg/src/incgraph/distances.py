"""Distance functions and blockwise pairwise-distance helpers.

Cosine distance is ``1 - u.v / (|u||v|)`` with range [0, 2]; it is not a
proper metric, so nothing here assumes the triangle inequality.  All
computations run in float64 regardless of the input dtype.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError, ValidationError

METRICS = ("cosine", "euclidean")


def distance(u: np.ndarray, v: np.ndarray, metric: str = "cosine") -> float:
    """Distance between two vectors under the given metric."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise ParameterError(f"incompatible shapes {u.shape} and {v.shape}")
    if metric == "cosine":
        nu = np.linalg.norm(u)
        nv = np.linalg.norm(v)
        if nu == 0.0 or nv == 0.0:
            raise ValidationError("cosine distance is undefined for a zero vector")
        d = 1.0 - float(np.dot(u, v) / (nu * nv))
        return min(max(d, 0.0), 2.0)
    if metric == "euclidean":
        return float(np.linalg.norm(u - v))
    raise ParameterError(f"unknown metric {metric!r}")


class MetricData:
    """Preprocessed matrix for fast blockwise distance computation."""

    def __init__(self, vectors: np.ndarray, metric: str):
        if metric not in METRICS:
            raise ParameterError(f"unknown metric {metric!r}")
        self.metric = metric
        x = np.asarray(vectors, dtype=np.float64)
        if metric == "cosine":
            norms = np.linalg.norm(x, axis=1)
            zero = np.nonzero(norms == 0.0)[0]
            if zero.size:
                raise ValidationError(
                    f"cosine distance is undefined for zero vector in row {int(zero[0])}"
                )
            self.x = x / norms[:, None]
            self.sq = None
        else:
            self.x = x
            self.sq = np.einsum("ij,ij->i", x, x)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def block(self, row_start: int, row_stop: int, col_stop: int) -> np.ndarray:
        """Distances from rows [row_start, row_stop) to rows [0, col_stop)."""
        rows = self.x[row_start:row_stop]
        cols = self.x[:col_stop]
        if self.metric == "cosine":
            d = 1.0 - rows @ cols.T
            np.clip(d, 0.0, 2.0, out=d)
        else:
            d = (
                self.sq[row_start:row_stop, None]
                + self.sq[None, :col_stop]
                - 2.0 * (rows @ cols.T)
            )
            np.clip(d, 0.0, None, out=d)
            np.sqrt(d, out=d)
        return d

    def row(self, i: int) -> np.ndarray:
        """Distances from row ``i`` to every row (including itself)."""
        return self.block(i, i + 1, self.n)[0]

    def row_for(self, v: np.ndarray) -> np.ndarray:
        """Distances from an external vector ``v`` to every stored row."""
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (self.x.shape[1],):
            raise ParameterError(
                f"vector has dimension {v.shape}, expected ({self.x.shape[1]},)"
            )
        if self.metric == "cosine":
            nv = np.linalg.norm(v)
            if nv == 0.0:
                raise ValidationError("cosine distance is undefined for a zero vector")
            d = 1.0 - self.x @ (v / nv)
            np.clip(d, 0.0, 2.0, out=d)
        else:
            d = self.sq + v @ v - 2.0 * (self.x @ v)
            np.clip(d, 0.0, None, out=d)
            np.sqrt(d, out=d)
        return d


def pairwise_distances(
    vectors: np.ndarray, metric: str = "cosine", dtype=None
) -> np.ndarray:
    """Full N x N distance matrix (zero diagonal).

    ``dtype`` defaults to float64 below 4096 rows and float32 above, which
    keeps the matrix for desk-scale corpora within a few hundred MB.
    """
    md = MetricData(vectors, metric)
    n = md.n
    if dtype is None:
        dtype = np.float64 if n <= 4096 else np.float32
    out = np.empty((n, n), dtype=dtype)
    step = max(1, int(2**25 // max(n, 1)))
    for start in range(0, n, step):
        stop = min(n, start + step)
        out[start:stop] = md.block(start, stop, n)
    np.fill_diagonal(out, 0.0)
    return out
