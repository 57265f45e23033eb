"""End-to-end experiment orchestration: build, embed, cluster, evaluate.

A single experiment repeats the pipeline ``repeats`` times — randomizing the
insertion ordering for incremental graphs and the assigner seed otherwise —
and aggregates V-measure/homogeneity/completeness across runs into a
versioned JSON-serializable report.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.sparse import csgraph

from .construction import (
    augment_mst,
    build_epsilon,
    build_knn_incremental,
    build_knn_standard,
    random_ordering,
    seed_for_run,
)
from .errors import DisconnectedAffinityError, NumericalError, ParameterError
from .graph import NeighborGraph, connected_components
from .metrics import homogeneity_completeness, v_measure
from .spectral import (
    SpectralEmbedding,
    affinity_connection,
    affinity_gaussian,
    kmeans_assign,
    kmeans_raw,
    laplacian_eigenmaps,
    qr_assign,
)
from .stats import StatsReport, estimate_stats_mc
from .vectorstore import VectorDataset, read_embeddings, read_labels

FORMAT_VERSION = "1"

METHODS = ("knn", "inc_knn", "epsilon", "knn_mst", "inc_knn_mst")
K_METHODS = ("knn", "inc_knn", "knn_mst", "inc_knn_mst")
AFFINITIES = ("connection", "gaussian")
ASSIGNERS = ("kmeans", "qr")


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce an experiment run-for-run."""

    method: str
    clusters: int
    k: int | None = None
    epsilon: float | None = None
    metric: str = "cosine"
    affinity: str = "connection"
    t: float = 1.0
    assign: str = "kmeans"
    repeats: int = 1
    base_seed: int = 0
    beta: float = 1.0
    input_path: str | None = None
    labels_path: str | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(
                f"unknown method {self.method!r}; expected one of {METHODS}"
            )
        if self.method in K_METHODS:
            if self.k is None:
                raise ParameterError(f"method {self.method!r} requires k")
            if self.epsilon is not None:
                raise ParameterError("epsilon is meaningless for k-NN methods")
        else:
            if self.epsilon is None:
                raise ParameterError("method 'epsilon' requires epsilon")
            if self.k is not None:
                raise ParameterError("k is meaningless for the epsilon method")
        if self.affinity not in AFFINITIES:
            raise ParameterError(
                f"unknown affinity {self.affinity!r}; expected one of {AFFINITIES}"
            )
        if self.assign not in ASSIGNERS:
            raise ParameterError(
                f"unknown assigner {self.assign!r}; expected one of {ASSIGNERS}"
            )
        if self.repeats < 1:
            raise ParameterError(f"repeats must be >= 1, got {self.repeats}")
        if self.clusters < 1:
            raise ParameterError(f"clusters must be >= 1, got {self.clusters}")
        if self.beta < 0:
            raise ParameterError(f"beta must be nonnegative, got {self.beta}")
        if self.t <= 0:
            raise ParameterError(f"t must be positive, got {self.t}")

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "clusters": self.clusters,
            "k": self.k,
            "epsilon": self.epsilon,
            "metric": self.metric,
            "affinity": self.affinity,
            "t": self.t,
            "assign": self.assign,
            "repeats": self.repeats,
            "base_seed": self.base_seed,
            "beta": self.beta,
            "input_path": self.input_path,
            "labels_path": self.labels_path,
        }


@dataclass
class RunReport:
    """Aggregated scores for one experiment configuration."""

    config: dict
    runs: list[dict]
    v_mean: float
    h_mean: float
    c_mean: float
    v_std: float | None = None
    h_std: float | None = None
    c_std: float | None = None
    components: dict | None = None
    stats: StatsReport | None = None
    timings: dict[str, float] = field(default_factory=dict)
    format_version: str = FORMAT_VERSION

    def to_dict(self, include_timings: bool = True) -> dict:
        out = {
            "format_version": self.format_version,
            "config": self.config,
            "runs": self.runs,
            "v_mean": self.v_mean,
            "h_mean": self.h_mean,
            "c_mean": self.c_mean,
            "v_std": self.v_std,
            "h_std": self.h_std,
            "c_std": self.c_std,
            "components": self.components,
            "stats": None if self.stats is None else self.stats.to_dict(),
        }
        if include_timings:
            out["timings"] = self.timings
        return out

    def to_json(self, include_timings: bool = True) -> str:
        return json.dumps(
            self.to_dict(include_timings=include_timings), sort_keys=True, indent=2
        )


def load_dataset(
    input_path: str, labels_path: str | None = None, fmt: str | None = None
) -> VectorDataset:
    """Load an embedding file (format inferred from the suffix unless given)
    and optionally attach labels."""
    if fmt is None:
        fmt = "tsv" if str(input_path).endswith((".tsv", ".csv", ".txt")) else "binary"
    data = read_embeddings(input_path, format=fmt)
    if labels_path is not None:
        labels = read_labels(labels_path)
        data = VectorDataset(vectors=data.vectors, labels=labels, name=data.name)
    return data


def build_graph(
    data: VectorDataset,
    method: str,
    k: int | None = None,
    epsilon: float | None = None,
    metric: str = "cosine",
    ordering_seed: int | None = None,
) -> NeighborGraph:
    """Construct the neighbor graph a method name refers to."""
    if method not in METHODS:
        raise ParameterError(f"unknown method {method!r}")
    if method in ("knn", "knn_mst"):
        graph = build_knn_standard(data, k, metric=metric)
    elif method in ("inc_knn", "inc_knn_mst"):
        ordering = None
        if ordering_seed is not None:
            ordering = random_ordering(data.n, ordering_seed)
        graph = build_knn_incremental(data, k, metric=metric, ordering=ordering)
    else:
        graph = build_epsilon(data, epsilon, metric=metric)
    if method.endswith("_mst"):
        graph = augment_mst(graph, data)
    return graph


def _indicator_embedding(affinity_matrix, m: int) -> SpectralEmbedding:
    """Last-ditch coordinates: membership indicators of the m largest
    components."""
    ncomp, labels = csgraph.connected_components(affinity_matrix, directed=False)
    sizes = np.bincount(labels, minlength=ncomp)
    biggest = np.argsort(-sizes, kind="stable")[:m]
    coords = np.zeros((affinity_matrix.shape[0], m))
    for col, comp in enumerate(biggest):
        coords[labels == comp, col] = 1.0
    return SpectralEmbedding(
        coordinates=coords, eigenvalues=np.zeros(m), dropped_constant=False
    )


def _embed_and_assign(
    graph: NeighborGraph,
    data: VectorDataset,
    config: ExperimentConfig,
    run_seed: int,
    timings: dict,
) -> tuple[np.ndarray, dict]:
    diag: dict = {}
    t0 = time.perf_counter()
    if config.affinity == "connection":
        aff = affinity_connection(graph)
    else:
        # kernel distances live in the same space the graph was built in
        aff = affinity_gaussian(graph, data, config.t,
                                normalize=config.metric == "cosine")
    timings["affinity"] += time.perf_counter() - t0

    t0 = time.perf_counter()
    fallback = None
    try:
        embedding = laplacian_eigenmaps(aff, config.clusters)
    except DisconnectedAffinityError as exc:
        diag["disconnected"] = True
        diag["num_components"] = exc.num_components
        try:
            embedding = laplacian_eigenmaps(
                aff, min(config.clusters, aff.n - 1), allow_disconnected=True
            )
            fallback = "blocked_laplacian"
        except NumericalError:
            embedding = _indicator_embedding(aff.matrix, config.clusters)
            fallback = "component_indicators"
    timings["embed"] += time.perf_counter() - t0
    if fallback:
        diag["fallback"] = fallback
    diag.setdefault("disconnected", False)

    t0 = time.perf_counter()
    if config.assign == "kmeans":
        pred = kmeans_assign(embedding, config.clusters, seed=run_seed)
    else:
        try:
            pred = qr_assign(embedding, config.clusters)
        except (NumericalError, ParameterError):
            if not diag["disconnected"]:
                raise
            # rank-deficient disconnected fallback: indicators, then retry
            embedding = _indicator_embedding(aff.matrix, config.clusters)
            diag["fallback"] = "component_indicators"
            pred = qr_assign(embedding, config.clusters)
    timings["assign"] += time.perf_counter() - t0
    return pred, diag


def run_experiment(
    config: ExperimentConfig,
    data: VectorDataset | None = None,
    compute_stats_report: bool = True,
) -> RunReport:
    """Execute the configured experiment and aggregate scores across repeats."""
    if data is None:
        if config.input_path is None:
            raise ParameterError("no dataset: supply data or config.input_path")
        data = load_dataset(config.input_path, config.labels_path)
    if data.labels is None:
        raise ParameterError("dataset has no labels; scoring is impossible")
    true_ids = data.label_ids()

    timings = {"build": 0.0, "affinity": 0.0, "embed": 0.0, "assign": 0.0,
               "score": 0.0, "stats": 0.0}
    runs = []
    vs, hs, cs = [], [], []
    first_graph = None
    for r in range(config.repeats):
        run_seed = int(seed_for_run(config.base_seed, r))
        t0 = time.perf_counter()
        graph = build_graph(
            data,
            config.method,
            k=config.k,
            epsilon=config.epsilon,
            metric=config.metric,
            ordering_seed=run_seed if config.method.startswith("inc_knn") else None,
        )
        timings["build"] += time.perf_counter() - t0
        if first_graph is None:
            first_graph = graph

        pred, diag = _embed_and_assign(graph, data, config, run_seed, timings)

        t0 = time.perf_counter()
        h, c = homogeneity_completeness(true_ids, pred)
        v = v_measure(true_ids, pred, beta=config.beta)
        timings["score"] += time.perf_counter() - t0
        comp = connected_components(graph)
        runs.append({
            "run_index": r,
            "seed": run_seed,
            "v_measure": v,
            "homogeneity": h,
            "completeness": c,
            "num_components": comp.num_components,
            **diag,
        })
        vs.append(v)
        hs.append(h)
        cs.append(c)

    comp0 = connected_components(first_graph)
    components = {
        "num_components": comp0.num_components,
        "max_component_size": comp0.max_component_size,
        "graph_edges": comp0.graph_edges,
        "digraph_edges": comp0.digraph_edges,
    }
    stats = None
    if compute_stats_report:
        t0 = time.perf_counter()
        stats = estimate_stats_mc(first_graph, labels=true_ids,
                                  seed=config.base_seed)
        timings["stats"] += time.perf_counter() - t0

    many = config.repeats > 1
    return RunReport(
        config=config.to_dict(),
        runs=runs,
        v_mean=float(np.mean(vs)),
        h_mean=float(np.mean(hs)),
        c_mean=float(np.mean(cs)),
        v_std=float(np.std(vs)) if many else None,
        h_std=float(np.std(hs)) if many else None,
        c_std=float(np.std(cs)) if many else None,
        components=components,
        stats=stats,
        timings={k: round(v, 6) for k, v in timings.items()},
    )


def sweep_k(
    config: ExperimentConfig,
    k_values: list[int],
    data: VectorDataset | None = None,
    compute_stats_report: bool = False,
) -> list[RunReport]:
    """One full experiment per k, sharing every other knob."""
    if config.method not in K_METHODS:
        raise ParameterError(f"sweep requires a k-NN method, got {config.method!r}")
    if not k_values:
        raise ParameterError("empty k list")
    if data is None and config.input_path is not None:
        data = load_dataset(config.input_path, config.labels_path)
    reports = []
    for k in k_values:
        cfg = ExperimentConfig(**{**config.to_dict(), "k": int(k)})
        reports.append(
            run_experiment(cfg, data=data, compute_stats_report=compute_stats_report)
        )
    return reports


def sweep_to_dict(reports: list[RunReport], include_timings: bool = True) -> dict:
    """Combined sweep report keyed by k, ready for plotting."""
    return {
        "format_version": FORMAT_VERSION,
        "sweep": {
            str(rep.config["k"]): rep.to_dict(include_timings=include_timings)
            for rep in reports
        },
    }


def baseline_kmeans_hd(
    data: VectorDataset,
    clusters: int,
    seed: int = 0,
    repeats: int = 1,
    beta: float = 1.0,
) -> RunReport:
    """k-means directly on the high-dimensional vectors, scored identically."""
    if data.labels is None:
        raise ParameterError("dataset has no labels; scoring is impossible")
    true_ids = data.label_ids()
    timings = {"assign": 0.0, "score": 0.0}
    runs, vs, hs, cs = [], [], [], []
    for r in range(repeats):
        run_seed = int(seed_for_run(seed, r))
        t0 = time.perf_counter()
        pred = kmeans_raw(data.vectors, clusters, seed=run_seed)
        timings["assign"] += time.perf_counter() - t0
        t0 = time.perf_counter()
        h, c = homogeneity_completeness(true_ids, pred)
        v = v_measure(true_ids, pred, beta=beta)
        timings["score"] += time.perf_counter() - t0
        runs.append({"run_index": r, "seed": run_seed, "v_measure": v,
                     "homogeneity": h, "completeness": c})
        vs.append(v)
        hs.append(h)
        cs.append(c)
    many = repeats > 1
    return RunReport(
        config={"method": "kmeans_hd", "clusters": clusters, "repeats": repeats,
                "base_seed": seed, "beta": beta},
        runs=runs,
        v_mean=float(np.mean(vs)),
        h_mean=float(np.mean(hs)),
        c_mean=float(np.mean(cs)),
        v_std=float(np.std(vs)) if many else None,
        h_std=float(np.std(hs)) if many else None,
        c_std=float(np.std(cs)) if many else None,
        timings={k: round(v, 6) for k, v in timings.items()},
    )


def report_components(
    data: VectorDataset,
    method: str,
    values: list,
    metric: str = "cosine",
    ordering_seed: int | None = None,
) -> list[dict]:
    """Connectivity table: one row per parameter value.

    ``values`` are k's for k-NN methods and thresholds for the epsilon
    method.  Rows carry the component count, largest component size, and
    both edge counts.
    """
    if not values:
        raise ParameterError("no parameter values given")
    rows = []
    for value in values:
        if method in K_METHODS:
            graph = build_graph(data, method, k=int(value), metric=metric,
                                ordering_seed=ordering_seed)
        else:
            graph = build_graph(data, method, epsilon=float(value), metric=metric)
        comp = connected_components(graph)
        rows.append({
            "parameter": value,
            "num_components": comp.num_components,
            "max_component_size": comp.max_component_size,
            "graph_edges": comp.graph_edges,
            "digraph_edges": comp.digraph_edges,
        })
    return rows


def merge_reports(reports: list[RunReport | dict]) -> dict:
    """Average scores over reports from partitions of the same source."""
    if not reports:
        raise ParameterError("no reports to merge")
    dicts = [r.to_dict() if isinstance(r, RunReport) else r for r in reports]
    for d in dicts:
        if d.get("format_version") != FORMAT_VERSION:
            raise ParameterError(
                f"cannot merge report with format_version {d.get('format_version')!r}"
            )
    return {
        "format_version": FORMAT_VERSION,
        "num_reports": len(dicts),
        "v_mean": float(np.mean([d["v_mean"] for d in dicts])),
        "h_mean": float(np.mean([d["h_mean"] for d in dicts])),
        "c_mean": float(np.mean([d["c_mean"] for d in dicts])),
        "sources": [d.get("config") for d in dicts],
    }
