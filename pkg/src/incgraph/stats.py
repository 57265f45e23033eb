"""Graph- and node-level statistics with exact and Monte-Carlo estimators.

Everything except PageRank is computed on the undirected view of the graph;
PageRank follows the directed neighbor relation.  Large graphs can be
summarized by seeded sampling estimators that stop once a 95% confidence
interval reaches a requested half-width.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import NumericalError, ParameterError
from .graph import NeighborGraph

_Z95 = 1.959963984540054  # normal 97.5% quantile
_EXACT_NODE_LIMIT = 50_000
_EXACT_EDGE_LIMIT = 5_000_000
_BATCH = 4096
_SENTENCE_SPLIT = re.compile(r"[.!?]+")


@dataclass(frozen=True)
class StatValue:
    """A statistic plus how it was obtained.

    ``value`` is None for statistics that are undefined on the given graph
    (e.g. assortativity with zero degree variance).  ``ci_halfwidth`` is a
    95% normal-approximation half-width and only present for sampled values.
    """

    value: float | None
    sampled: bool = False
    ci_halfwidth: float | None = None
    converged: bool = True

    def to_dict(self) -> dict:
        out: dict = {"value": self.value, "sampled": self.sampled}
        if self.sampled:
            out["ci_halfwidth"] = self.ci_halfwidth
            out["converged"] = self.converged
        return out


@dataclass
class StatsReport:
    """Bundle of graph statistics, serialized inside pipeline reports."""

    num_nodes: int
    num_edges_undirected: int
    num_edges_directed: int
    density: StatValue
    assortativity: StatValue
    transitivity: StatValue
    avg_local_clustering: StatValue
    pagerank_summary: dict[str, float]
    homophily: StatValue | None = None
    doc_stats: dict[str, float] | None = None
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "num_nodes": self.num_nodes,
            "num_edges_undirected": self.num_edges_undirected,
            "num_edges_directed": self.num_edges_directed,
            "density": self.density.to_dict(),
            "assortativity": self.assortativity.to_dict(),
            "transitivity": self.transitivity.to_dict(),
            "avg_local_clustering": self.avg_local_clustering.to_dict(),
            "pagerank_summary": self.pagerank_summary,
        }
        if self.homophily is not None:
            out["homophily"] = self.homophily.to_dict()
        if self.doc_stats is not None:
            out["doc_stats"] = self.doc_stats
        if self.extras:
            out.update(self.extras)
        return out


# ---------------------------------------------------------------------------
# exact statistics
# ---------------------------------------------------------------------------

def density(graph: NeighborGraph) -> float:
    """2|E| / (n(n-1)) over undirected edges."""
    if graph.n < 2:
        raise ParameterError("density requires at least 2 nodes")
    e = len(graph.undirected_pairs())
    return 2.0 * e / (graph.n * (graph.n - 1))


def assortativity(graph: NeighborGraph) -> float | None:
    """Pearson correlation of degrees across undirected edge endpoints.

    Each edge contributes both orderings (j, k) and (k, j).  Returns None
    when every endpoint has the same degree, where the correlation is
    undefined.
    """
    pairs = graph.undirected_pairs()
    if len(pairs) < 2:
        raise ParameterError("assortativity requires at least 2 edges")
    deg = graph.degrees().astype(np.float64)
    j = np.concatenate([deg[pairs[:, 0]], deg[pairs[:, 1]]])
    k = np.concatenate([deg[pairs[:, 1]], deg[pairs[:, 0]]])
    vj = j - j.mean()
    vk = k - k.mean()
    denom = np.sqrt((vj**2).sum() * (vk**2).sum())
    if denom == 0.0:
        return None
    return float((vj * vk).sum() / denom)


def _triangle_and_triple_counts(adj: sp.csr_matrix) -> tuple[float, float]:
    deg = np.asarray(adj.sum(axis=1)).ravel()
    triples = float((deg * (deg - 1)).sum() / 2.0)
    closed = float((adj @ adj).multiply(adj).sum())  # 6x the triangle count
    return closed / 6.0, triples


def transitivity(graph: NeighborGraph) -> float:
    """3 * triangles / connected triples; 0 when no triple exists."""
    adj = graph.undirected_adjacency()
    triangles, triples = _triangle_and_triple_counts(adj)
    if triples == 0.0:
        return 0.0
    return 3.0 * triangles / triples


def local_clustering(graph: NeighborGraph) -> np.ndarray:
    """Per-node clustering coefficient C_v; 0 for nodes of degree < 2."""
    adj = graph.undirected_adjacency()
    deg = np.asarray(adj.sum(axis=1)).ravel()
    closed = np.asarray((adj @ adj).multiply(adj).sum(axis=1)).ravel()
    coeff = np.zeros(graph.n)
    mask = deg >= 2
    coeff[mask] = closed[mask] / (deg[mask] * (deg[mask] - 1))
    return coeff


def local_clustering_avg(graph: NeighborGraph) -> float:
    """Mean of C_v over all nodes (degree < 2 contributes 0)."""
    return float(local_clustering(graph).mean())


def pagerank(
    graph: NeighborGraph,
    d: float = 0.85,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> np.ndarray:
    """Power-iteration PageRank on the directed relation.

    Dangling nodes redistribute their mass uniformly.  Raises a numerical
    error with the final residual if the L1 residual does not drop below
    ``tol`` within ``max_iter`` iterations.
    """
    if not 0.0 < d < 1.0:
        raise ParameterError(f"damping must lie in (0, 1), got {d}")
    n = graph.n
    adj = graph.adjacency()
    out_deg = np.asarray(adj.sum(axis=1)).ravel()
    dangling = out_deg == 0
    with np.errstate(divide="ignore"):
        inv = np.where(dangling, 0.0, 1.0 / np.maximum(out_deg, 1))
    transition = sp.diags(inv) @ adj  # row-stochastic except dangling rows
    x = np.full(n, 1.0 / n)
    for _ in range(max_iter):
        nxt = d * (transition.T @ x + x[dangling].sum() / n) + (1.0 - d) / n
        residual = np.abs(nxt - x).sum()
        x = nxt
        if residual < tol:
            x /= x.sum()
            return x
    raise NumericalError(
        f"pagerank did not reach residual {tol} in {max_iter} iterations "
        f"(final residual {residual:.3e})"
    )


def homophily(graph: NeighborGraph, labels: np.ndarray) -> float | None:
    """Fraction of undirected edges joining same-label endpoints.

    Returns None on an edgeless graph.
    """
    labels = np.asarray(labels)
    if labels.shape != (graph.n,):
        raise ParameterError(
            f"need one label per node ({graph.n}), got shape {labels.shape}"
        )
    pairs = graph.undirected_pairs()
    if len(pairs) == 0:
        return None
    same = labels[pairs[:, 0]] == labels[pairs[:, 1]]
    return float(same.mean())


def _pagerank_summary(scores: np.ndarray) -> dict[str, float]:
    p = scores[scores > 0]
    return {
        "mean": float(scores.mean()),
        "max": float(scores.max()),
        "entropy": float(-(p * np.log(p)).sum()),
    }


def doc_text_stats(texts: list[str]) -> dict[str, float]:
    """Per-document averages: whitespace words, terminal-punctuation
    sentences, and characters."""
    if not texts:
        raise ParameterError("no texts supplied")
    words = [len(t.split()) for t in texts]
    sentences = [
        max(len([s for s in _SENTENCE_SPLIT.split(t) if s.strip()]), 1)
        for t in texts
    ]
    chars = [len(t) for t in texts]
    return {
        "avg_words": float(np.mean(words)),
        "avg_sentences": float(np.mean(sentences)),
        "avg_characters": float(np.mean(chars)),
    }


def compute_stats(
    graph: NeighborGraph,
    labels: np.ndarray | None = None,
    texts: list[str] | None = None,
) -> StatsReport:
    """Exact statistics for a graph of desk scale."""
    pairs = graph.undirected_pairs()
    try:
        assort = assortativity(graph)
    except ParameterError:
        assort = None
    return StatsReport(
        num_nodes=graph.n,
        num_edges_undirected=len(pairs),
        num_edges_directed=graph.num_edges,
        density=StatValue(density(graph)),
        assortativity=StatValue(assort),
        transitivity=StatValue(transitivity(graph)),
        avg_local_clustering=StatValue(local_clustering_avg(graph)),
        pagerank_summary=_pagerank_summary(pagerank(graph)),
        homophily=None if labels is None else StatValue(homophily(graph, labels)),
        doc_stats=None if texts is None else doc_text_stats(texts),
    )


# ---------------------------------------------------------------------------
# Monte-Carlo estimators
# ---------------------------------------------------------------------------

class _MeanTracker:
    """Streaming mean/variance with a normal-approximation CI."""

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self.m2 = 0.0

    def add(self, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=np.float64)
        b = values.size
        if b == 0:
            return
        bmean = values.mean()
        bm2 = ((values - bmean) ** 2).sum()
        delta = bmean - self.mean
        total = self.count + b
        self.mean += delta * b / total
        self.m2 += bm2 + delta**2 * self.count * b / total
        self.count = total

    def halfwidth(self) -> float:
        if self.count < 2:
            return np.inf
        var = self.m2 / (self.count - 1)
        return _Z95 * np.sqrt(var / self.count)


def _sample_until(draw, target: float, max_samples: int) -> tuple[_MeanTracker, bool]:
    tracker = _MeanTracker()
    while tracker.count < max_samples:
        draw(tracker, min(_BATCH, max_samples - tracker.count))
        if tracker.count >= 2 * _BATCH and tracker.halfwidth() <= target:
            return tracker, True
        # zero-variance degenerate input: nothing more to learn
        if tracker.count >= _BATCH and tracker.m2 == 0.0:
            return tracker, True
    return tracker, tracker.halfwidth() <= target


def _sampled_local_clustering(
    graph: NeighborGraph, rng, target, max_samples
) -> StatValue:
    adj = graph.undirected_adjacency().astype(np.int8)
    deg = np.asarray(adj.sum(axis=1)).ravel()

    def draw(tracker, batch):
        nodes = rng.integers(graph.n, size=batch)
        vals = np.zeros(batch)
        for i, v in enumerate(nodes):
            k = deg[v]
            if k < 2:
                continue
            nbrs = adj.indices[adj.indptr[v]:adj.indptr[v + 1]]
            links = adj[nbrs][:, nbrs].sum() / 2
            vals[i] = links / (k * (k - 1) / 2.0)
        tracker.add(vals)

    tracker, ok = _sample_until(draw, target, max_samples)
    return StatValue(tracker.mean, sampled=True, ci_halfwidth=tracker.halfwidth(),
                     converged=ok)


def _sampled_homophily(
    graph: NeighborGraph, labels, rng, target, max_samples
) -> StatValue:
    pairs = graph.undirected_pairs()
    labels = np.asarray(labels)

    def draw(tracker, batch):
        idx = rng.integers(len(pairs), size=batch)
        tracker.add(
            (labels[pairs[idx, 0]] == labels[pairs[idx, 1]]).astype(np.float64)
        )

    tracker, ok = _sample_until(draw, target, max_samples)
    return StatValue(tracker.mean, sampled=True, ci_halfwidth=tracker.halfwidth(),
                     converged=ok)


def _sampled_transitivity(
    graph: NeighborGraph, rng, target, max_samples
) -> StatValue:
    """Closure probability of a uniformly random connected triple.

    Centers are drawn proportionally to the number of triples they anchor,
    then a random neighbor pair is tested for adjacency; the closure rate
    equals 3*triangles/triples.
    """
    adj = graph.undirected_adjacency().astype(np.int8)
    deg = np.asarray(adj.sum(axis=1)).ravel()
    weight = deg * (deg - 1) / 2.0
    total = weight.sum()
    if total == 0.0:
        return StatValue(0.0, sampled=True, ci_halfwidth=0.0, converged=True)
    prob = weight / total
    dense_lookup = dict()

    def closed(v) -> float:
        nbrs = adj.indices[adj.indptr[v]:adj.indptr[v + 1]]
        a, b = rng.choice(len(nbrs), size=2, replace=False)
        u, w = nbrs[a], nbrs[b]
        row = dense_lookup.get(u)
        if row is None:
            row = set(adj.indices[adj.indptr[u]:adj.indptr[u + 1]].tolist())
            if len(dense_lookup) < 4096:
                dense_lookup[u] = row
        return 1.0 if w in row else 0.0

    def draw(tracker, batch):
        centers = rng.choice(graph.n, size=batch, p=prob)
        tracker.add([closed(v) for v in centers])

    tracker, ok = _sample_until(draw, target, max_samples)
    return StatValue(tracker.mean, sampled=True, ci_halfwidth=tracker.halfwidth(),
                     converged=ok)


def _sampled_assortativity(
    graph: NeighborGraph, rng, target, max_samples
) -> StatValue:
    """Edge-sampled Pearson degree correlation.

    The point estimate uses pooled sample moments over both endpoint
    orderings of each drawn edge.  The half-width comes from the
    influence-function (delta-method) variance of the correlation
    coefficient, which stays consistent for the skewed, discrete degree
    distributions real graphs have — the textbook (1 - r^2)/sqrt(M) formula
    assumes bivariate normality and undercovers here.
    """
    pairs = graph.undirected_pairs()
    deg = graph.degrees().astype(np.float64)
    a_parts, b_parts = [], []
    count = 0

    def estimate():
        a = np.concatenate(a_parts)
        b = np.concatenate(b_parts)
        pooled = np.concatenate([a, b])
        mean, var = pooled.mean(), pooled.var()
        if var == 0.0:
            return None, 0.0
        x, y = (a - mean) / np.sqrt(var), (b - mean) / np.sqrt(var)
        r = float((x * y).mean())
        # both orderings of an edge share one influence value, so the
        # independent unit is the edge draw
        psi = x * y - 0.5 * r * (x * x + y * y)
        half = float(_Z95 * psi.std() / np.sqrt(count))
        return r, half

    while count < max_samples:
        batch = min(_BATCH, max_samples - count)
        idx = rng.integers(len(pairs), size=batch)
        a_parts.append(deg[pairs[idx, 0]])
        b_parts.append(deg[pairs[idx, 1]])
        count += batch
        if count < 2 * _BATCH:
            continue
        r, half = estimate()
        if r is None:
            return StatValue(None, sampled=True, ci_halfwidth=0.0, converged=True)
        if half <= target:
            return StatValue(r, sampled=True, ci_halfwidth=half, converged=True)
    r, half = estimate()
    if r is None:
        return StatValue(None, sampled=True, ci_halfwidth=0.0, converged=True)
    return StatValue(r, sampled=True, ci_halfwidth=half, converged=half <= target)


def estimate_stats_mc(
    graph: NeighborGraph,
    labels: np.ndarray | None = None,
    seed: int = 0,
    target_halfwidth: float = 0.005,
    node_limit: int = _EXACT_NODE_LIMIT,
    edge_limit: int = _EXACT_EDGE_LIMIT,
    max_samples: int = 2_000_000,
    texts: list[str] | None = None,
) -> StatsReport:
    """Statistics with sampling on large graphs, exact otherwise.

    Graphs under the node/edge limits — or any call with
    ``target_halfwidth`` 0 — take the exact path.  Sampled values carry
    their achieved 95% CI half-width and a convergence flag.  Density,
    PageRank, and the count fields are always exact.
    """
    if target_halfwidth < 0:
        raise ParameterError("target_halfwidth must be nonnegative")
    pairs = graph.undirected_pairs()
    small = graph.n <= node_limit and len(pairs) <= edge_limit
    if small or target_halfwidth == 0.0:
        return compute_stats(graph, labels=labels, texts=texts)

    rng = np.random.default_rng(seed)
    return StatsReport(
        num_nodes=graph.n,
        num_edges_undirected=len(pairs),
        num_edges_directed=graph.num_edges,
        density=StatValue(density(graph)),
        assortativity=_sampled_assortativity(graph, rng, target_halfwidth,
                                             max_samples),
        transitivity=_sampled_transitivity(graph, rng, target_halfwidth,
                                           max_samples),
        avg_local_clustering=_sampled_local_clustering(graph, rng,
                                                       target_halfwidth,
                                                       max_samples),
        pagerank_summary=_pagerank_summary(pagerank(graph)),
        homophily=None if labels is None else _sampled_homophily(
            graph, labels, rng, target_halfwidth, max_samples
        ),
        doc_stats=None if texts is None else doc_text_stats(texts),
    )
