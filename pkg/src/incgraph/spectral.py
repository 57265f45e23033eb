"""Affinity matrices, Laplacian-eigenmap embeddings, and cluster assignment.

The embedding solves the generalized problem L f = lambda D f with
L = D - W and D the diagonal of row sums.  On a connected affinity the
smallest eigenvalue is 0 with a constant eigenvector; that dimension carries
no information and is dropped, so an embedding of dimension m uses the
eigenvectors of the m smallest nonzero eigenvalues.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.sparse import csgraph
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from .errors import (
    DisconnectedAffinityError,
    NumericalError,
    ParameterError,
)
from .graph import NeighborGraph, symmetrize
from .vectorstore import VectorDataset, write_embeddings

_DENSE_LIMIT = 512
_SHIFT = -1e-3


@dataclass
class AffinityMatrix:
    """Sparse symmetric nonnegative weights interpreting adjacency as similarity."""

    matrix: sp.csr_matrix
    kind: str  # "connection" | "gaussian"
    t: float | None = None

    def __post_init__(self):
        w = self.matrix.tocsr()
        if w.shape[0] != w.shape[1]:
            raise ParameterError("affinity matrix must be square")
        if (abs(w - w.T) > 0).nnz:
            raise ParameterError("affinity matrix must be symmetric")
        if w.diagonal().any():
            raise ParameterError("affinity matrix must have a zero diagonal")
        if w.nnz and w.data.min() < 0:
            raise ParameterError("affinity weights must be nonnegative")
        w.sort_indices()
        self.matrix = w

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def num_components(self) -> int:
        ncomp, _ = csgraph.connected_components(self.matrix, directed=False)
        return int(ncomp)


@dataclass
class SpectralEmbedding:
    """Eigenvector coordinates with their eigenvalues, constant dimension removed."""

    coordinates: np.ndarray  # N x m
    eigenvalues: np.ndarray  # m ascending, nonnegative
    dropped_constant: bool = True

    @property
    def n(self) -> int:
        return self.coordinates.shape[0]

    @property
    def dim(self) -> int:
        return self.coordinates.shape[1]


def affinity_connection(graph: NeighborGraph) -> AffinityMatrix:
    """Connection-based affinity: the symmetrized 0/1 adjacency.

    One-way neighbor relations weigh 0.5, mutual ones 1.0.
    """
    return AffinityMatrix(matrix=symmetrize(graph), kind="connection")


def affinity_gaussian(
    graph: NeighborGraph,
    data: VectorDataset,
    t: float,
    normalize: bool = True,
) -> AffinityMatrix:
    """Heat-kernel affinity exp(-|x_i - x_j|^2 / (4t)) on the graph support.

    With ``normalize`` (the default) the squared distance is taken between
    unit-normalized vectors, which keeps the kernel consistent with graphs
    built under cosine distance; pass False for raw euclidean distances.
    """
    if t <= 0:
        raise ParameterError(f"kernel bandwidth t must be positive, got {t}")
    if graph.n != data.n:
        raise ParameterError(
            f"graph has {graph.n} nodes but dataset has {data.n} rows"
        )
    pairs = graph.undirected_pairs()
    x = np.asarray(data.vectors, dtype=np.float64)
    if normalize:
        norms = np.linalg.norm(x, axis=1, keepdims=True)
        if (norms == 0).any():
            raise ParameterError("cannot normalize zero vectors for the kernel")
        x = x / norms
    diff = x[pairs[:, 0]] - x[pairs[:, 1]]
    sq = np.einsum("ij,ij->i", diff, diff)
    weights = np.exp(-sq / (4.0 * t))
    rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
    cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
    w = sp.csr_matrix(
        (np.concatenate([weights, weights]), (rows, cols)), shape=(graph.n, graph.n)
    )
    return AffinityMatrix(matrix=w, kind="gaussian", t=float(t))


def laplacian_eigenmaps(
    affinity: AffinityMatrix,
    m: int,
    allow_disconnected: bool = False,
    tol: float = 1e-8,
    max_iter: int = 5000,
) -> SpectralEmbedding:
    """Embed nodes by the eigenvectors of the m smallest nonzero eigenvalues.

    Raises :class:`DisconnectedAffinityError` (carrying the component count)
    when the support is disconnected, unless ``allow_disconnected`` is set,
    in which case the block spectrum of the disconnected Laplacian is used
    and one zero-eigenvalue dimension is dropped.
    """
    n = affinity.n
    if not 1 <= m <= n - 1:
        raise ParameterError(f"m={m} out of range for n={n} (need 1 <= m <= n-1)")
    ncomp = affinity.num_components()
    if ncomp > 1 and not allow_disconnected:
        raise DisconnectedAffinityError(ncomp)

    w = affinity.matrix.astype(np.float64)
    deg = np.asarray(w.sum(axis=1)).ravel()
    if allow_disconnected:
        deg = np.maximum(deg, 1e-12)  # isolated nodes keep D positive definite
    lap = sp.diags(deg) - w

    if n <= _DENSE_LIMIT or m + 2 >= n:
        vals, vecs = scipy.linalg.eigh(lap.toarray(), np.diag(deg))
        vals, vecs = vals[: m + 1], vecs[:, : m + 1]
    else:
        # fixed starting vector: ARPACK otherwise draws one from the global
        # RNG, which breaks run-to-run reproducibility of degenerate spectra
        v0 = np.random.default_rng(0).standard_normal(n)
        try:
            vals, vecs = eigsh(
                lap.tocsc(),
                k=m + 1,
                M=sp.diags(deg).tocsc(),
                sigma=_SHIFT,
                which="LM",
                tol=tol,
                maxiter=max_iter,
                v0=v0,
            )
        except ArpackNoConvergence as exc:
            raise NumericalError(
                f"eigensolver did not converge within {max_iter} iterations: "
                f"{len(exc.eigenvalues)} of {m + 1} eigenpairs found"
            ) from exc
        except ArpackError as exc:
            raise NumericalError(f"eigensolver failed: {exc}") from exc
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]

    scale = max(abs(vals[-1]), 1.0)
    if abs(vals[0]) > 1e-8 * scale:
        raise NumericalError(
            f"smallest eigenvalue {vals[0]} is not numerically zero"
        )
    if ncomp == 1:
        v0 = vecs[:, 0]
        if np.ptp(v0) > 1e-6 * max(np.abs(v0).max(), 1e-300):
            raise NumericalError(
                "zero-eigenvalue eigenvector is not constant; "
                "the affinity may be numerically disconnected"
            )

    coords = vecs[:, 1:].copy()
    for j in range(coords.shape[1]):
        lead = np.argmax(np.abs(coords[:, j]))
        if coords[lead, j] < 0:
            coords[:, j] = -coords[:, j]
    return SpectralEmbedding(
        coordinates=coords,
        eigenvalues=np.maximum(vals[1:], 0.0),
        dropped_constant=True,
    )


# ---------------------------------------------------------------------------
# k-means assignment
# ---------------------------------------------------------------------------

def _plus_plus_init(x: np.ndarray, c: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    centers = np.empty((c, x.shape[1]))
    centers[0] = x[rng.integers(n)]
    d2 = ((x - centers[0]) ** 2).sum(axis=1)
    for i in range(1, c):
        total = d2.sum()
        if total > 0:
            idx = rng.choice(n, p=d2 / total)
        else:
            idx = rng.integers(n)
        centers[i] = x[idx]
        np.minimum(d2, ((x - centers[i]) ** 2).sum(axis=1), out=d2)
    return centers


def _lloyd(
    x: np.ndarray,
    centers: np.ndarray,
    max_iter: int,
    rtol: float,
) -> tuple[np.ndarray, float]:
    n, c = x.shape[0], centers.shape[0]
    prev = np.inf
    labels = np.zeros(n, dtype=np.int64)
    for _ in range(max_iter):
        d2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        labels = d2.argmin(axis=1)
        point_cost = d2[np.arange(n), labels]
        # revive empty clusters at the currently worst-fit points
        counts = np.bincount(labels, minlength=c)
        for empty in np.nonzero(counts == 0)[0]:
            far = int(np.argmax(point_cost))
            centers[empty] = x[far]
            labels[far] = empty
            point_cost[far] = 0.0
            counts = np.bincount(labels, minlength=c)
        inertia = float(point_cost.sum())
        if np.isfinite(prev) and prev - inertia <= rtol * max(prev, 1e-300):
            break
        prev = inertia
        for i in range(c):
            members = labels == i
            if members.any():
                centers[i] = x[members].mean(axis=0)
    return labels, inertia


def _kmeans(
    x: np.ndarray,
    c: int,
    seed: int,
    restarts: int = 10,
    max_iter: int = 300,
    rtol: float = 1e-6,
) -> np.ndarray:
    if np.ptp(x) == 0.0:
        warnings.warn(
            "all coordinates identical; returning a single cluster", RuntimeWarning
        )
        return np.zeros(x.shape[0], dtype=np.int64)
    best_labels, best_inertia = None, np.inf
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        centers = _plus_plus_init(x, c, rng)
        labels, inertia = _lloyd(x, centers, max_iter, rtol)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    return best_labels


def kmeans_assign(
    embedding: SpectralEmbedding, clusters: int, seed: int = 0
) -> np.ndarray:
    """Cluster embedding rows with k-means++ (10 restarts, seeded)."""
    if not 1 <= clusters <= embedding.n:
        raise ParameterError(
            f"clusters={clusters} out of range for {embedding.n} points"
        )
    x = np.asarray(embedding.coordinates, dtype=np.float64)
    return _kmeans(x, clusters, seed)


def kmeans_raw(x: np.ndarray, clusters: int, seed: int = 0) -> np.ndarray:
    """k-means on an arbitrary coordinate matrix (same engine, no embedding)."""
    x = np.asarray(x, dtype=np.float64)
    if not 1 <= clusters <= x.shape[0]:
        raise ParameterError(f"clusters={clusters} out of range for {x.shape[0]} points")
    return _kmeans(x, clusters, seed)


# ---------------------------------------------------------------------------
# QR assignment
# ---------------------------------------------------------------------------

def qr_assign(embedding: SpectralEmbedding, clusters: int) -> np.ndarray:
    """Deterministic assignment via column-pivoted QR representative selection.

    Works on the cluster-indicator subspace — the constant direction plus the
    first ``clusters - 1`` embedding coordinates (the embedding has the
    constant dimension removed, so it is restored here).  Pivoted QR of the
    transposed basis picks ``clusters`` representative rows; each point is
    expressed in the representative basis and assigned to the coefficient of
    largest magnitude.  No randomness anywhere.
    """
    y = np.asarray(embedding.coordinates, dtype=np.float64)
    n = y.shape[0]
    spread = np.ptp(y, axis=0)
    usable = spread > 1e-12 * max(np.abs(y).max(), 1.0)
    y = y[:, usable]
    if embedding.dropped_constant:
        if y.shape[1] < clusters - 1:
            raise ParameterError(
                f"embedding has {y.shape[1]} usable dimensions, "
                f"need >= {clusters - 1}"
            )
        basis = np.column_stack([np.full(n, 1.0 / np.sqrt(n)), y[:, : clusters - 1]])
    else:
        if y.shape[1] < clusters:
            raise ParameterError(
                f"embedding has {y.shape[1]} usable dimensions, need >= {clusters}"
            )
        basis = y[:, :clusters]
    s = scipy.linalg.svdvals(basis)
    if (s > 1e-8 * s[0]).sum() < clusters:
        raise NumericalError(
            f"embedding has numerical rank < {clusters}; QR assignment is ill-posed"
        )
    _, _, piv = scipy.linalg.qr(basis.T, mode="economic", pivoting=True)
    reps = basis[np.sort(piv[:clusters])]
    try:
        coeff = scipy.linalg.solve(reps.T, basis.T, assume_a="gen").T
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"representative system is singular: {exc}") from exc
    return np.abs(coeff).argmax(axis=1).astype(np.int64)


def save_embedding(embedding: SpectralEmbedding, path) -> None:
    """Write coordinates in the binary matrix format plus a sidecar
    ``<path>.eigenvalues.txt`` with one eigenvalue per line."""
    ds = VectorDataset(vectors=embedding.coordinates.astype(np.float32))
    write_embeddings(ds, path)
    with open(f"{path}.eigenvalues.txt", "w", encoding="utf-8") as fh:
        for val in embedding.eigenvalues:
            fh.write(f"{float(val)!r}\n")
