"""Neighborhood-graph representation, connectivity analysis, symmetrization.

A :class:`NeighborGraph` is a directed edge list over ``n`` nodes.  k-NN
graphs store the k out-edges each node asserts; epsilon graphs store every
in-range pair as two directed edges.  Connectivity always ignores edge
direction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .distances import distance
from .errors import FormatError, ParameterError, ValidationError

KNN_KINDS = ("knn", "inc_knn")


@dataclass(frozen=True)
class Provenance:
    """How a graph was built: construction kind plus its parameters."""

    kind: str  # "knn" | "inc_knn" | "epsilon"
    k: int | None = None
    epsilon: float | None = None
    ordering_seed: int | None = None
    mst_augmented: bool = False

    def __post_init__(self):
        if self.kind in KNN_KINDS:
            if self.k is None:
                raise ParameterError(f"provenance {self.kind} requires k")
        elif self.kind == "epsilon":
            if self.epsilon is None:
                raise ParameterError("epsilon provenance requires a threshold")
        else:
            raise ParameterError(f"unknown provenance kind {self.kind!r}")

    def __str__(self) -> str:
        if self.kind == "epsilon":
            s = f"epsilon(eps={self.epsilon!r})"
        elif self.kind == "inc_knn" and self.ordering_seed is not None:
            s = f"inc_knn(k={self.k},seed={self.ordering_seed})"
        else:
            s = f"{self.kind}(k={self.k})"
        return s + ("+mst" if self.mst_augmented else "")

    @classmethod
    def parse(cls, text: str) -> "Provenance":
        mst = text.endswith("+mst")
        if mst:
            text = text[: -len("+mst")]
        m = re.fullmatch(r"(\w+)\(([^)]*)\)", text)
        if not m:
            raise FormatError(f"unparseable provenance {text!r}")
        kind, body = m.group(1), m.group(2)
        kv: dict[str, str] = {}
        for part in body.split(","):
            if part:
                key, _, val = part.partition("=")
                kv[key] = val
        return cls(
            kind=kind,
            k=int(kv["k"]) if "k" in kv else None,
            epsilon=float(kv["eps"]) if "eps" in kv else None,
            ordering_seed=int(kv["seed"]) if "seed" in kv else None,
            mst_augmented=mst,
        )


@dataclass
class NeighborGraph:
    """Directed neighborhood graph stored as a canonically sorted edge list."""

    n: int
    src: np.ndarray
    dst: np.ndarray
    dist: np.ndarray
    metric: str
    provenance: Provenance
    _pairs: np.ndarray | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.src = np.ascontiguousarray(self.src, dtype=np.int64)
        self.dst = np.ascontiguousarray(self.dst, dtype=np.int64)
        self.dist = np.ascontiguousarray(self.dist, dtype=np.float64)
        if not (len(self.src) == len(self.dst) == len(self.dist)):
            raise ValidationError("edge arrays have mismatched lengths")
        if self.n < 1:
            raise ValidationError("graph must have at least one node")
        if len(self.src):
            if self.src.min() < 0 or self.dst.min() < 0 or \
               self.src.max() >= self.n or self.dst.max() >= self.n:
                raise ValidationError("edge endpoint out of range")
            if (self.src == self.dst).any():
                raise ValidationError("self-loop in edge list")
            if (self.dist < 0).any():
                raise ValidationError("negative edge distance")
            order = np.lexsort((self.dst, self.src))
            self.src = self.src[order]
            self.dst = self.dst[order]
            self.dist = self.dist[order]
            key = self.src * self.n + self.dst
            if (np.diff(key) == 0).any():
                raise ValidationError("duplicate (src, dst) edge")

    @property
    def num_edges(self) -> int:
        return len(self.src)

    def undirected_pairs(self) -> np.ndarray:
        """Distinct unordered connected pairs as an (E, 2) array with u < v."""
        if self._pairs is None:
            if self.num_edges == 0:
                self._pairs = np.empty((0, 2), dtype=np.int64)
            else:
                u = np.minimum(self.src, self.dst)
                v = np.maximum(self.src, self.dst)
                key = np.unique(u * self.n + v)
                self._pairs = np.column_stack((key // self.n, key % self.n))
        return self._pairs

    def degrees(self) -> np.ndarray:
        """Undirected degree (number of distinct neighbors) per node."""
        pairs = self.undirected_pairs()
        deg = np.zeros(self.n, dtype=np.int64)
        np.add.at(deg, pairs.ravel(), 1)
        return deg

    def adjacency(self) -> sp.csr_matrix:
        """Directed 0/1 adjacency in CSR form."""
        data = np.ones(self.num_edges, dtype=np.float64)
        return sp.csr_matrix((data, (self.src, self.dst)), shape=(self.n, self.n))

    def undirected_adjacency(self) -> sp.csr_matrix:
        """Symmetric 0/1 adjacency over the undirected pair support."""
        pairs = self.undirected_pairs()
        data = np.ones(2 * len(pairs), dtype=np.float64)
        rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
        cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n))

    def validate_distances(self, vectors: np.ndarray, tol: float = 1e-6) -> None:
        """Check stored distances against the dataset the graph came from."""
        for s, t, d in zip(self.src, self.dst, self.dist):
            ref = distance(vectors[s], vectors[t], self.metric)
            if abs(ref - d) > tol:
                raise ValidationError(
                    f"edge ({s},{t}) stores {d}, metric gives {ref}"
                )

    def with_provenance(self, **changes) -> "NeighborGraph":
        g = NeighborGraph(
            n=self.n, src=self.src, dst=self.dst, dist=self.dist,
            metric=self.metric, provenance=replace(self.provenance, **changes),
        )
        return g


@dataclass(frozen=True)
class ComponentReport:
    """Connectivity summary in the shape of the construction tables."""

    num_components: int
    max_component_size: int
    graph_edges: int
    digraph_edges: int


def connected_components(graph: NeighborGraph) -> ComponentReport:
    """Component count and edge bookkeeping for a graph's undirected view.

    ``graph_edges`` counts what the construction asserted: directed
    out-edges for k-NN style graphs, unordered in-range pairs for epsilon
    graphs.  ``digraph_edges`` is the nonzero count of the symmetrized
    adjacency, i.e. twice the number of distinct connected pairs.
    """
    pairs = graph.undirected_pairs()
    if len(pairs):
        adj = sp.csr_matrix(
            (np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])),
            shape=(graph.n, graph.n),
        )
        ncomp, labels = csgraph.connected_components(adj, directed=False)
        max_size = int(np.bincount(labels).max())
    else:
        ncomp, max_size = graph.n, 1
    if graph.provenance.kind in KNN_KINDS:
        graph_edges = graph.num_edges
    else:
        graph_edges = len(pairs)
    return ComponentReport(
        num_components=int(ncomp),
        max_component_size=max_size,
        graph_edges=int(graph_edges),
        digraph_edges=2 * len(pairs),
    )


def symmetrize(graph: NeighborGraph) -> sp.csr_matrix:
    """Average the 0/1 adjacency with its transpose: W = (A + A^T) / 2.

    Entries are 0.5 for one-way neighbor relations and 1.0 for mutual ones;
    the result is exactly symmetric.
    """
    a = graph.adjacency()
    w = (a + a.T) * 0.5
    w.sort_indices()
    return w


def save_graph(graph: NeighborGraph, path: str | Path) -> None:
    """Write the edge list as text: header line, then src<TAB>dst<TAB>distance."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            f"# n={graph.n} metric={graph.metric} provenance={graph.provenance}\n"
        )
        for s, t, d in zip(graph.src, graph.dst, graph.dist):
            fh.write(f"{s}\t{t}\t{float(d)!r}\n")


def load_graph(path: str | Path) -> NeighborGraph:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        m = re.fullmatch(r"# n=(\d+) metric=(\w+) provenance=(.+)", header)
        if not m:
            raise FormatError(f"{path}: bad graph header {header!r}")
        n = int(m.group(1))
        metric = m.group(2)
        provenance = Provenance.parse(m.group(3))
        src, dst, dist = [], [], []
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise FormatError(f"{path}:{lineno}: expected 3 fields")
            src.append(int(parts[0]))
            dst.append(int(parts[1]))
            dist.append(float(parts[2]))
    return NeighborGraph(
        n=n,
        src=np.asarray(src, dtype=np.int64),
        dst=np.asarray(dst, dtype=np.int64),
        dist=np.asarray(dist, dtype=np.float64),
        metric=metric,
        provenance=provenance,
    )
