"""Graph construction: standard k-NN, incremental k-NN, epsilon graphs,
the minimal connecting threshold, and MST augmentation.

The incremental builder inserts nodes one at a time and links each new node
to its k nearest among the nodes already inserted.  Every insertion attaches
to the existing (connected) graph, so the result is connected for any k and
has exactly k*(N-k) directed edges.  The trade-off is a dependence on the
insertion order, which callers randomize and average over.

Nearest-neighbor ties are broken toward the smaller original node index so
that all builders are fully deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .distances import MetricData
from .errors import ParameterError
from .graph import NeighborGraph, Provenance
from .vectorstore import VectorDataset

_BLOCK = 512


@dataclass(frozen=True)
class Ordering:
    """A node-insertion order: a permutation of 0..N-1 plus the seed it came from."""

    permutation: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        perm = np.ascontiguousarray(self.permutation, dtype=np.int64)
        object.__setattr__(self, "permutation", perm)
        n = len(perm)
        if n == 0 or not np.array_equal(np.sort(perm), np.arange(n)):
            raise ParameterError("ordering is not a permutation of 0..N-1")

    @property
    def n(self) -> int:
        return len(self.permutation)

    def extended(self) -> "Ordering":
        """The same ordering with one more node appended at the end."""
        return Ordering(np.append(self.permutation, self.n), seed=self.seed)


def seed_for_run(base_seed: int, run_index: int) -> int:
    """Derive the ordering seed for repeat ``run_index`` of an experiment."""
    ss = np.random.SeedSequence([int(base_seed), int(run_index)])
    return int(ss.generate_state(1, np.uint64)[0])


def random_ordering(n: int, seed: int) -> Ordering:
    rng = np.random.default_rng(seed)
    return Ordering(rng.permutation(n), seed=int(seed))


def identity_ordering(n: int) -> Ordering:
    return Ordering(np.arange(n, dtype=np.int64))


def _check_k(k: int, n: int) -> None:
    if not 1 <= k <= n - 1:
        raise ParameterError(f"k={k} out of range for N={n} (need 1 <= k <= N-1)")


def _select_k_smallest(dmat: np.ndarray, k: int, col_index: np.ndarray) -> np.ndarray:
    """Per row, the column positions of the k smallest entries.

    Ties at the selection boundary are resolved toward the smaller
    ``col_index`` value; rows where the k-smallest set is unambiguous take
    the O(m) argpartition path.
    """
    b, m = dmat.shape
    if k > m:
        raise ParameterError("not enough candidates for k selection")
    part = np.argpartition(dmat, k - 1, axis=1)[:, :k]
    boundary = np.take_along_axis(dmat, part, axis=1).max(axis=1)
    n_le = (dmat <= boundary[:, None]).sum(axis=1)
    for r in np.nonzero(n_le > k)[0]:
        row = dmat[r]
        cand = np.nonzero(row <= boundary[r])[0]
        order = np.lexsort((col_index[cand], row[cand]))
        part[r] = cand[order[:k]]
    return part


def build_knn_standard(
    data: VectorDataset, k: int, metric: str = "cosine"
) -> NeighborGraph:
    """Directed k-NN graph: every node points at its k nearest neighbors."""
    n = data.n
    _check_k(k, n)
    md = MetricData(data.vectors, metric)
    node_index = np.arange(n, dtype=np.int64)
    srcs, dsts, dists = [], [], []
    for start in range(0, n, _BLOCK):
        stop = min(n, start + _BLOCK)
        d = md.block(start, stop, n)
        rows = np.arange(stop - start)
        d[rows, start + rows] = np.inf  # exclude self
        sel = _select_k_smallest(d, k, node_index)
        srcs.append(np.repeat(node_index[start:stop], k))
        dsts.append(sel.ravel())
        dists.append(np.take_along_axis(d, sel, axis=1).ravel())
    return NeighborGraph(
        n=n,
        src=np.concatenate(srcs),
        dst=np.concatenate(dsts),
        dist=np.concatenate(dists),
        metric=metric,
        provenance=Provenance(kind="knn", k=k),
    )


def build_knn_incremental(
    data: VectorDataset,
    k: int,
    metric: str = "cosine",
    ordering: Ordering | None = None,
    seed: int = 0,
) -> NeighborGraph:
    """Connectivity-guaranteed k-NN graph built by sequential insertion.

    The first k nodes of the ordering start edge-free; each later node gains
    exactly k out-edges to its k nearest already-inserted nodes.  When no
    explicit ``ordering`` is given, a random one is drawn from ``seed``.
    """
    n = data.n
    _check_k(k, n)
    if ordering is None:
        ordering = random_ordering(n, seed)
    if ordering.n != n:
        raise ParameterError(f"ordering covers {ordering.n} nodes, dataset has {n}")
    perm = ordering.permutation
    md = MetricData(data.vectors[perm], metric)

    srcs, dsts, dists = [], [], []
    start = k  # positions 0..k-1 are the edge-free seed set
    while start < n:
        stop = min(n, start + _BLOCK)
        d = md.block(start, stop, stop)
        # position start+r may only see candidates at positions < start+r
        tail = d[:, start:stop]
        tail[np.triu_indices_from(tail)] = np.inf
        sel = _select_k_smallest(d, k, perm[:stop])
        srcs.append(np.repeat(perm[start:stop], k))
        dsts.append(perm[sel.ravel()])
        dists.append(np.take_along_axis(d, sel, axis=1).ravel())
        start = stop

    return NeighborGraph(
        n=n,
        src=np.concatenate(srcs) if srcs else np.empty(0, dtype=np.int64),
        dst=np.concatenate(dsts) if dsts else np.empty(0, dtype=np.int64),
        dist=np.concatenate(dists) if dists else np.empty(0),
        metric=metric,
        provenance=Provenance(kind="inc_knn", k=k, ordering_seed=ordering.seed),
    )


def extend_incremental(
    graph: NeighborGraph, data: VectorDataset, new_vector: np.ndarray
) -> NeighborGraph:
    """Append one node to an incrementally built graph.

    The new node gains exactly k edges to its nearest existing nodes; no
    pre-existing edge changes, so the result equals a fresh build over the
    extended ordering.
    """
    if graph.provenance.kind != "inc_knn" or graph.provenance.mst_augmented:
        raise ParameterError(
            f"can only extend plain inc_knn graphs, got {graph.provenance}"
        )
    if graph.n != data.n:
        raise ParameterError(
            f"graph has {graph.n} nodes but dataset has {data.n} rows"
        )
    k = graph.provenance.k
    md = MetricData(data.vectors, graph.metric)
    d = md.row_for(np.asarray(new_vector, dtype=np.float64))
    sel = _select_k_smallest(d[None, :], k, np.arange(graph.n))[0]
    new_id = graph.n
    return NeighborGraph(
        n=graph.n + 1,
        src=np.concatenate([graph.src, np.full(k, new_id, dtype=np.int64)]),
        dst=np.concatenate([graph.dst, sel]),
        dist=np.concatenate([graph.dist, d[sel]]),
        metric=graph.metric,
        provenance=graph.provenance,
    )


def build_epsilon(
    data: VectorDataset, epsilon: float, metric: str = "cosine"
) -> NeighborGraph:
    """Epsilon graph: connect every pair at distance <= epsilon.

    The threshold is inclusive so that the bisection limit of
    :func:`find_epsilon0` itself yields a connected graph.  Each in-range
    pair is stored as two directed edges with identical distances.
    """
    if epsilon <= 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    n = data.n
    md = MetricData(data.vectors, metric)
    us, vs, ws = [], [], []
    for start in range(0, n, _BLOCK):
        stop = min(n, start + _BLOCK)
        d = md.block(start, stop, n)
        rows, cols = np.nonzero(d <= epsilon)
        keep = start + rows < cols  # upper triangle only
        us.append(start + rows[keep])
        vs.append(cols[keep])
        ws.append(d[rows[keep], cols[keep]])
    u = np.concatenate(us)
    v = np.concatenate(vs)
    w = np.concatenate(ws)
    return NeighborGraph(
        n=n,
        src=np.concatenate([u, v]),
        dst=np.concatenate([v, u]),
        dist=np.concatenate([w, w]),
        metric=metric,
        provenance=Provenance(kind="epsilon", epsilon=float(epsilon)),
    )


def find_epsilon0(
    data: VectorDataset,
    metric: str = "cosine",
    tol: float = 1e-6,
    max_iter: int = 64,
) -> float:
    """Smallest threshold (within ``tol``) whose epsilon graph is connected.

    Bisects over [0, max pairwise distance]; connectivity is monotone in the
    threshold, so the bracket always contains the answer.
    """
    n = data.n
    if n < 2:
        raise ParameterError("need at least 2 points to search for a threshold")
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    md = MetricData(data.vectors, metric)
    dtype = np.float64 if n <= 4096 else np.float32
    dmat = np.empty((n, n), dtype=dtype)
    for start in range(0, n, _BLOCK):
        stop = min(n, start + _BLOCK)
        dmat[start:stop] = md.block(start, stop, n)

    def connected_at(eps: float) -> bool:
        mask = dmat <= eps
        np.fill_diagonal(mask, False)
        rows, cols = np.nonzero(mask)
        adj = sp.csr_matrix(
            (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n)
        )
        ncomp, _ = csgraph.connected_components(adj, directed=False)
        return ncomp == 1

    if connected_at(0.0):  # all points coincide
        return 0.0
    lo = 0.0
    hi = float(dmat.max())
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if connected_at(mid):
            hi = mid
        else:
            lo = mid
    return hi


def minimum_spanning_tree_edges(
    data: VectorDataset, metric: str = "cosine"
) -> tuple[np.ndarray, np.ndarray]:
    """Exact MST of the complete pairwise-distance graph.

    Single-tree growth with an O(N) frontier array: O(N^2) distance work and
    O(N) memory, which is the right trade for complete graphs.  Returns the
    (N-1, 2) pair array (u < v per row) and the pair distances.
    """
    n = data.n
    md = MetricData(data.vectors, metric)
    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = md.row(0)
    best[0] = np.inf
    best_src = np.zeros(n, dtype=np.int64)
    pairs = np.empty((n - 1, 2), dtype=np.int64)
    dists = np.empty(n - 1)
    for i in range(n - 1):
        masked = np.where(in_tree, np.inf, best)
        j = int(np.argmin(masked))
        u, v = int(best_src[j]), j
        pairs[i] = (u, v) if u < v else (v, u)
        dists[i] = best[j]
        in_tree[j] = True
        row = md.row(j)
        closer = row < best
        best[closer] = row[closer]
        best_src[closer] = j
        best[j] = np.inf
    return pairs, dists


def augment_mst(
    graph: NeighborGraph, data: VectorDataset, metric: str | None = None
) -> NeighborGraph:
    """Union the graph's edges with an exact MST of the full pairwise graph.

    The MST edges enter in both directions; edges already present keep their
    stored distances.  The result is connected by construction.
    """
    if metric is None:
        metric = graph.metric
    if metric != graph.metric:
        raise ParameterError(
            f"metric {metric!r} does not match graph metric {graph.metric!r}"
        )
    if graph.n != data.n:
        raise ParameterError(
            f"graph has {graph.n} nodes but dataset has {data.n} rows"
        )
    pairs, dists = minimum_spanning_tree_edges(data, metric)
    src = np.concatenate([graph.src, pairs[:, 0], pairs[:, 1]])
    dst = np.concatenate([graph.dst, pairs[:, 1], pairs[:, 0]])
    dist = np.concatenate([graph.dist, dists, dists])
    key = src * graph.n + dst
    _, first = np.unique(key, return_index=True)  # existing edges sort first
    return NeighborGraph(
        n=graph.n,
        src=src[first],
        dst=dst[first],
        dist=dist[first],
        metric=graph.metric,
        provenance=Provenance(
            kind=graph.provenance.kind,
            k=graph.provenance.k,
            epsilon=graph.provenance.epsilon,
            ordering_seed=graph.provenance.ordering_seed,
            mst_augmented=True,
        ),
    )
