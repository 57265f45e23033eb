"""End-to-end experiments, sweeps, report plumbing, and the CLI.

Pipeline-level behavior is exercised on synthetic blob corpora small enough
to keep each case under a few seconds; CLI commands run in-process through
the exit-code-mapping entry point.
"""

import json

import numpy as np
import pytest

from incgraph import (
    ExperimentConfig,
    ParameterError,
    VectorDataset,
    baseline_kmeans_hd,
    build_graph,
    load_dataset,
    make_blob_dataset,
    merge_reports,
    report_components,
    run_experiment,
    sweep_k,
    sweep_to_dict,
    write_embeddings,
    write_labels,
)
from incgraph.cli import main
from incgraph.pipeline import FORMAT_VERSION

BLOBS_600 = make_blob_dataset(n=600, dim=16, blobs=3, separation=6.0, seed=0)
BLOBS_200 = make_blob_dataset(n=200, dim=8, blobs=3, separation=6.0, seed=1)


def _config(**overrides):
    base = dict(method="inc_knn", clusters=3, k=2, metric="euclidean",
                assign="qr", repeats=1, base_seed=0)
    base.update(overrides)
    return ExperimentConfig(**base)


# ---------------------------------------------------------------------------
# configuration validation
# ---------------------------------------------------------------------------

def test_config_round_trips_through_dict():
    cfg = _config(repeats=3, beta=2.0)
    assert ExperimentConfig(**cfg.to_dict()) == cfg


@pytest.mark.parametrize("overrides", [
    dict(method="voronoi"),
    dict(method="epsilon"),                    # epsilon method without epsilon
    dict(method="epsilon", epsilon=0.5, k=2),  # both parameters
    dict(method="knn", k=None),
    dict(method="knn", k=2, epsilon=0.5),
    dict(affinity="cubic"),
    dict(assign="agglomerative"),
    dict(repeats=0),
    dict(clusters=0),
    dict(beta=-1.0),
    dict(t=0.0),
])
def test_config_contradictions_rejected(overrides):
    with pytest.raises(ParameterError):
        _config(**overrides)


# ---------------------------------------------------------------------------
# dataset loading and graph dispatch
# ---------------------------------------------------------------------------

def test_load_dataset_sniffs_format(tmp_path):
    tsv = tmp_path / "vecs.tsv"
    tsv.write_text("0.0\t1.0\n1.0\t0.0\n0.5\t0.5\n")
    labels = tmp_path / "vecs.labels"
    labels.write_text("a\nb\na\n")
    data = load_dataset(str(tsv), str(labels))
    assert data.n == 3 and data.dim == 2
    assert data.labels == ["a", "b", "a"]

    binary = tmp_path / "vecs.bin"
    write_embeddings(data, binary)
    again = load_dataset(str(binary))
    np.testing.assert_array_equal(again.vectors, data.vectors)


@pytest.mark.parametrize("method,kind,augmented", [
    ("knn", "knn", False),
    ("inc_knn", "inc_knn", False),
    ("epsilon", "epsilon", False),
    ("knn_mst", "knn", True),
    ("inc_knn_mst", "inc_knn", True),
])
def test_build_graph_dispatch(method, kind, augmented):
    kwargs = dict(k=2) if "knn" in method else dict(epsilon=2.0)
    g = build_graph(BLOBS_200, method, metric="euclidean", ordering_seed=0,
                    **kwargs)
    assert g.provenance.kind == kind
    assert g.provenance.mst_augmented == augmented


def test_build_graph_unknown_method():
    with pytest.raises(ParameterError):
        build_graph(BLOBS_200, "delaunay", k=2)


# ---------------------------------------------------------------------------
# run_experiment
# ---------------------------------------------------------------------------

def test_blobs_incremental_scores_high_and_stable():
    cfg = _config(repeats=10)
    report = run_experiment(cfg, data=BLOBS_600, compute_stats_report=False)
    assert report.v_mean >= 0.95
    assert report.v_std <= 0.02
    assert all(run["num_components"] == 1 for run in report.runs)
    assert not any(run["disconnected"] for run in report.runs)


def test_disconnected_knn_flagged_but_scored():
    cfg = _config(method="knn", k=1, repeats=2)
    report = run_experiment(cfg, data=BLOBS_600, compute_stats_report=False)
    assert report.components["num_components"] > 1
    for run in report.runs:
        assert run["disconnected"] is True
        assert run["num_components"] > 1
        assert run["fallback"] in ("blocked_laplacian", "component_indicators")
        assert 0.0 <= run["v_measure"] <= 1.0
    assert report.v_mean < 0.2  # fragmentation destroys the clustering


def test_incremental_never_disconnected():
    for k in (1, 2, 5):
        cfg = _config(k=k, repeats=3)
        report = run_experiment(cfg, data=BLOBS_200, compute_stats_report=False)
        assert all(run["num_components"] == 1 for run in report.runs)
        assert not any(run["disconnected"] for run in report.runs)


def test_report_deterministic_without_timings():
    cfg = _config(repeats=2)
    a = run_experiment(cfg, data=BLOBS_200, compute_stats_report=True)
    b = run_experiment(cfg, data=BLOBS_200, compute_stats_report=True)
    assert a.to_json(include_timings=False) == b.to_json(include_timings=False)


def test_std_present_only_with_repeats():
    single = run_experiment(_config(), data=BLOBS_200, compute_stats_report=False)
    assert single.v_std is None and single.h_std is None and single.c_std is None
    multi = run_experiment(_config(repeats=2), data=BLOBS_200,
                           compute_stats_report=False)
    assert multi.v_std is not None and multi.v_std >= 0.0


def test_scores_bounded_and_serializable():
    report = run_experiment(_config(repeats=2), data=BLOBS_200)
    for value in (report.v_mean, report.h_mean, report.c_mean):
        assert 0.0 <= value <= 1.0
    payload = json.loads(report.to_json())
    assert payload["format_version"] == FORMAT_VERSION
    assert payload["stats"]["num_nodes"] == 200
    assert abs(payload["v_mean"] - report.v_mean) < 1e-12


def test_run_experiment_requires_labels():
    unlabeled = VectorDataset(vectors=BLOBS_200.vectors)
    with pytest.raises(ParameterError):
        run_experiment(_config(), data=unlabeled)


def test_gaussian_affinity_path():
    cfg = _config(affinity="gaussian", t=2.0, repeats=2)
    report = run_experiment(cfg, data=BLOBS_200, compute_stats_report=False)
    assert report.v_mean >= 0.9


# ---------------------------------------------------------------------------
# sweeps, baseline, component tables
# ---------------------------------------------------------------------------

def test_sweep_incremental_nondegenerate_at_every_k():
    reports = sweep_k(_config(), [1, 2, 3, 6], data=BLOBS_200)
    assert len(reports) == 4
    for report in reports:
        assert report.components["num_components"] == 1
        assert report.v_mean > 0.5
    combined = sweep_to_dict(reports, include_timings=False)
    assert sorted(combined["sweep"]) == ["1", "2", "3", "6"]


def test_sweep_standard_knn_low_k_penalty():
    reports = sweep_k(_config(method="knn"), [1, 6], data=BLOBS_600)
    by_k = {rep.config["k"]: rep for rep in reports}
    assert by_k[1].components["num_components"] > 1
    assert by_k[1].v_mean < by_k[6].v_mean


def test_sweep_rejects_bad_input():
    with pytest.raises(ParameterError):
        sweep_k(_config(), [], data=BLOBS_200)
    with pytest.raises(ParameterError):
        sweep_k(_config(method="epsilon", k=None, epsilon=1.0), [1, 2],
                data=BLOBS_200)


def test_baseline_kmeans_high_dimensional():
    report = baseline_kmeans_hd(BLOBS_200, 3, seed=0, repeats=2)
    assert report.v_mean >= 0.95
    again = baseline_kmeans_hd(BLOBS_200, 3, seed=0, repeats=2)
    assert report.to_json(include_timings=False) == again.to_json(
        include_timings=False
    )


def test_baseline_single_cluster_scores_zero():
    report = baseline_kmeans_hd(BLOBS_200, 1, seed=0)
    assert report.v_mean == 0.0


def test_baseline_requires_labels():
    with pytest.raises(ParameterError):
        baseline_kmeans_hd(VectorDataset(vectors=BLOBS_200.vectors), 3)


def test_report_components_schema_and_counts():
    tiny = make_blob_dataset(n=10, dim=4, blobs=2, separation=5.0, seed=2)
    rows = report_components(tiny, "knn", [9], metric="euclidean")
    assert rows[0]["parameter"] == 9
    assert rows[0]["num_components"] == 1  # complete k-NN relation
    assert rows[0]["max_component_size"] == 10
    assert rows[0]["graph_edges"] == 9 * 10

    inc = report_components(tiny, "inc_knn", [1, 2], metric="euclidean",
                            ordering_seed=3)
    for row, k in zip(inc, [1, 2]):
        assert row["num_components"] == 1
        assert row["graph_edges"] == k * (10 - k)
        assert row["digraph_edges"] == 2 * k * (10 - k)  # no mutual pairs


def test_merge_reports_averages_scores():
    a = run_experiment(_config(), data=BLOBS_200, compute_stats_report=False)
    b = run_experiment(_config(base_seed=5), data=BLOBS_200,
                       compute_stats_report=False)
    merged = merge_reports([a, b])
    assert merged["num_reports"] == 2
    assert merged["v_mean"] == pytest.approx((a.v_mean + b.v_mean) / 2, abs=1e-12)
    assert len(merged["sources"]) == 2


def test_merge_rejects_version_mismatch_and_empty():
    good = run_experiment(_config(), data=BLOBS_200,
                          compute_stats_report=False).to_dict()
    bad = dict(good, format_version="0")
    with pytest.raises(ParameterError):
        merge_reports([good, bad])
    with pytest.raises(ParameterError):
        merge_reports([])


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

@pytest.fixture()
def corpus(tmp_path):
    emb = tmp_path / "blobs.bin"
    labels = tmp_path / "blobs.bin.labels"
    code = main([
        "synth", "--n", "150", "--dim", "8", "--blobs", "3",
        "--separation", "6.0", "--seed", "0", "--out", str(emb),
    ])
    assert code == 0
    assert labels.exists()
    return emb, labels


def test_cli_components_table(corpus, tmp_path, capsys):
    emb, _ = corpus
    out = tmp_path / "components.json"
    code = main([
        "components", "--input", str(emb), "--method", "inc_knn",
        "--k", "1,2", "--metric", "euclidean", "--seed", "0",
        "--out", str(out),
    ])
    assert code == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if "\t" in l]
    assert len(lines) == 2
    payload = json.loads(out.read_text())
    assert [row["num_components"] for row in payload["rows"]] == [1, 1]


def test_cli_cluster_report(corpus, tmp_path):
    emb, labels = corpus
    out = tmp_path / "report.json"
    code = main([
        "cluster", "--input", str(emb), "--labels", str(labels),
        "--method", "inc_knn", "--k", "2", "--metric", "euclidean",
        "--assign", "qr", "--clusters", "3", "--repeats", "2",
        "--seed", "0", "--out", str(out),
    ])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload["v_mean"] >= 0.85
    assert payload["config"]["method"] == "inc_knn"
    assert "timings" in payload


def test_cli_cluster_byte_reproducible(corpus, tmp_path):
    emb, labels = corpus
    args = [
        "cluster", "--input", str(emb), "--labels", str(labels),
        "--method", "inc_knn", "--k", "2", "--metric", "euclidean",
        "--assign", "kmeans", "--clusters", "3", "--repeats", "2",
        "--seed", "0", "--no-timings",
    ]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_build_then_stats(corpus, tmp_path):
    emb, labels = corpus
    graph_path = tmp_path / "graph.tsv"
    code = main([
        "build", "--input", str(emb), "--method", "inc_knn", "--k", "3",
        "--metric", "euclidean", "--seed", "1", "--out", str(graph_path),
    ])
    assert code == 0
    stats_out = tmp_path / "stats.json"
    code = main([
        "stats", "--graph", str(graph_path), "--labels", str(labels),
        "--out", str(stats_out),
    ])
    assert code == 0
    payload = json.loads(stats_out.read_text())
    assert payload["num_nodes"] == 150
    assert 0.0 <= payload["density"]["value"] <= 1.0
    assert 0.0 <= payload["homophily"]["value"] <= 1.0


def test_cli_epsilon0(tmp_path, capsys):
    tsv = tmp_path / "pts.tsv"
    tsv.write_text("0.0\n1.0\n3.0\n")
    code = main([
        "epsilon0", "--input", str(tsv), "--metric", "euclidean",
        "--tol", "1e-6",
    ])
    assert code == 0
    line = capsys.readouterr().out.strip()
    assert line.startswith("epsilon0 = ")
    assert float(line.split("=")[1]) == pytest.approx(2.0, abs=1e-4)


def test_cli_sweep_and_baseline(corpus, tmp_path):
    emb, labels = corpus
    sweep_out = tmp_path / "sweep.json"
    code = main([
        "sweep", "--input", str(emb), "--labels", str(labels),
        "--method", "inc_knn", "--k", "1,2", "--metric", "euclidean",
        "--assign", "qr", "--clusters", "3", "--seed", "0",
        "--no-timings", "--out", str(sweep_out),
    ])
    assert code == 0
    assert sorted(json.loads(sweep_out.read_text())["sweep"]) == ["1", "2"]

    base_out = tmp_path / "baseline.json"
    code = main([
        "baseline", "--input", str(emb), "--labels", str(labels),
        "--clusters", "3", "--seed", "0", "--out", str(base_out),
    ])
    assert code == 0
    assert json.loads(base_out.read_text())["v_mean"] >= 0.9


def test_cli_merge(corpus, tmp_path):
    emb, labels = corpus
    paths = []
    for i, seed in enumerate((0, 7)):
        out = tmp_path / f"r{i}.json"
        assert main([
            "cluster", "--input", str(emb), "--labels", str(labels),
            "--method", "inc_knn", "--k", "2", "--metric", "euclidean",
            "--assign", "qr", "--clusters", "3", "--seed", str(seed),
            "--no-stats", "--out", str(out),
        ]) == 0
        paths.append(str(out))
    merged_out = tmp_path / "merged.json"
    assert main(["merge", *paths, "--out", str(merged_out)]) == 0
    assert json.loads(merged_out.read_text())["num_reports"] == 2


def test_cli_exit_codes(corpus, tmp_path, capsys):
    emb, labels = corpus
    # missing required option -> usage error
    assert main(["cluster", "--input", str(emb), "--labels", str(labels)]) == 2
    # library-level parameter contradiction
    assert main([
        "components", "--input", str(emb), "--method", "epsilon",
        "--k", "1,2",
    ]) == 2
    # unreadable input file
    assert main([
        "cluster", "--input", str(tmp_path / "missing.bin"),
        "--labels", str(labels), "--clusters", "3", "--k", "2",
    ]) == 3
    capsys.readouterr()  # swallow accumulated error output
