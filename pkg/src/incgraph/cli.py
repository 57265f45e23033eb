"""Command-line interface for graph construction and clustering experiments.

Every command reads embeddings in the binary or TSV matrix format, emits
JSON (to --out or stdout), and exits 0 on success, 2 on parameter errors,
3 on data errors, and 4 on numerical errors.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .construction import find_epsilon0
from .errors import DataError, NumericalError, ParameterError
from .graph import load_graph, save_graph
from .pipeline import (
    ExperimentConfig,
    baseline_kmeans_hd,
    build_graph,
    load_dataset,
    merge_reports,
    report_components,
    run_experiment,
    sweep_k,
    sweep_to_dict,
)
from .stats import estimate_stats_mc
from .synthetic import make_blob_dataset
from .vectorstore import read_texts, write_embeddings, write_labels


def _emit(payload, out: str | None) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
        click.echo(f"wrote {out}")
    else:
        click.echo(text)


def _int_list(_ctx, _param, value):
    if value is None:
        return None
    try:
        return [int(part) for part in str(value).split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}")


def _float_list(_ctx, _param, value):
    if value is None:
        return None
    try:
        return [float(part) for part in str(value).split(",") if part.strip()]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got {value!r}")


_input_opt = click.option("--input", "input_path", required=True,
                          help="Embedding matrix file (binary or TSV).")
_labels_opt = click.option("--labels", "labels_path", default=None,
                           help="Label file, one label per row.")
_metric_opt = click.option("--metric", default="cosine",
                           type=click.Choice(["cosine", "euclidean"]))
_seed_opt = click.option("--seed", default=0, show_default=True,
                         help="Base seed; all randomness derives from it.")
_out_opt = click.option("--out", default=None, help="Output file (default stdout).")


@click.group()
def cli():
    """Neighborhood-graph construction and spectral clustering toolkit."""


@cli.command()
@_input_opt
@click.option("--method", default="knn",
              type=click.Choice(["knn", "inc_knn", "epsilon", "knn_mst",
                                 "inc_knn_mst"]))
@click.option("--k", callback=_int_list, default=None,
              help="Comma-separated k values.")
@click.option("--epsilon", callback=_float_list, default=None,
              help="Comma-separated distance thresholds.")
@_metric_opt
@_seed_opt
@_out_opt
def components(input_path, method, k, epsilon, metric, seed, out):
    """Connectivity table over a range of k or epsilon values."""
    data = load_dataset(input_path)
    values = k if method != "epsilon" else epsilon
    if values is None:
        raise ParameterError("supply --k for k-NN methods or --epsilon for epsilon")
    rows = report_components(data, method, values, metric=metric,
                             ordering_seed=seed if "inc" in method else None)
    for row in rows:
        click.echo(
            f"{row['parameter']}\t{row['num_components']}\t"
            f"{row['max_component_size']}\t{row['graph_edges']}\t"
            f"{row['digraph_edges']}"
        )
    if out:
        _emit({"method": method, "metric": metric, "rows": rows}, out)


@cli.command()
@_input_opt
@_metric_opt
@click.option("--tol", default=1e-6, show_default=True)
@_out_opt
def epsilon0(input_path, metric, tol, out):
    """Smallest threshold at which the epsilon-graph is connected."""
    data = load_dataset(input_path)
    value = find_epsilon0(data, metric=metric, tol=tol)
    click.echo(f"epsilon0 = {value:.6f}")
    if out:
        _emit({"epsilon0": value, "metric": metric, "tol": tol}, out)


@cli.command()
@_input_opt
@click.option("--method", default="inc_knn",
              type=click.Choice(["knn", "inc_knn", "epsilon", "knn_mst",
                                 "inc_knn_mst"]))
@click.option("--k", type=int, default=None)
@click.option("--epsilon", type=float, default=None)
@_metric_opt
@_seed_opt
@click.option("--out", required=True, help="Graph output path (TSV edge list).")
def build(input_path, method, k, epsilon, metric, seed, out):
    """Build one neighbor graph and save it as a tab-separated edge list."""
    data = load_dataset(input_path)
    graph = build_graph(data, method, k=k, epsilon=epsilon, metric=metric,
                        ordering_seed=seed if "inc" in method else None)
    save_graph(graph, out)
    click.echo(f"wrote {out}: n={graph.n} edges={graph.num_edges} "
               f"provenance={graph.provenance}")


@cli.command()
@_input_opt
@click.option("--labels", "labels_path", required=True,
              help="Ground-truth labels for scoring.")
@click.option("--method", default="inc_knn",
              type=click.Choice(["knn", "inc_knn", "epsilon", "knn_mst",
                                 "inc_knn_mst"]))
@click.option("--k", type=int, default=None)
@click.option("--epsilon", type=float, default=None)
@_metric_opt
@click.option("--affinity", default="connection",
              type=click.Choice(["connection", "gaussian"]))
@click.option("--t", default=1.0, show_default=True,
              help="Heat-kernel bandwidth for --affinity gaussian.")
@click.option("--assign", default="kmeans", type=click.Choice(["kmeans", "qr"]))
@click.option("--clusters", type=int, required=True)
@click.option("--repeats", default=1, show_default=True)
@_seed_opt
@click.option("--beta", default=1.0, show_default=True)
@click.option("--timings/--no-timings", default=True,
              help="Include wall-times in the report (disable for "
                   "byte-reproducible output).")
@click.option("--stats/--no-stats", "with_stats", default=True,
              help="Include graph statistics in the report.")
@_out_opt
def cluster(input_path, labels_path, method, k, epsilon, metric, affinity, t,
            assign, clusters, repeats, seed, beta, timings, with_stats, out):
    """Full pipeline: graph, eigenmap, cluster assignment, V-measure."""
    config = ExperimentConfig(
        method=method, clusters=clusters, k=k, epsilon=epsilon, metric=metric,
        affinity=affinity, t=t, assign=assign, repeats=repeats, base_seed=seed,
        beta=beta, input_path=input_path, labels_path=labels_path,
    )
    report = run_experiment(config, compute_stats_report=with_stats)
    _emit(report.to_dict(include_timings=timings), out)


@cli.command()
@_input_opt
@click.option("--labels", "labels_path", required=True)
@click.option("--method", default="inc_knn",
              type=click.Choice(["knn", "inc_knn", "knn_mst", "inc_knn_mst"]))
@click.option("--k", callback=_int_list, required=True,
              help="Comma-separated k values to sweep.")
@_metric_opt
@click.option("--affinity", default="connection",
              type=click.Choice(["connection", "gaussian"]))
@click.option("--t", default=1.0, show_default=True)
@click.option("--assign", default="kmeans", type=click.Choice(["kmeans", "qr"]))
@click.option("--clusters", type=int, required=True)
@click.option("--repeats", default=1, show_default=True)
@_seed_opt
@click.option("--beta", default=1.0, show_default=True)
@click.option("--timings/--no-timings", default=True)
@_out_opt
def sweep(input_path, labels_path, method, k, metric, affinity, t, assign,
          clusters, repeats, seed, beta, timings, out):
    """Run the clustering pipeline across a range of k values."""
    config = ExperimentConfig(
        method=method, clusters=clusters, k=k[0], metric=metric,
        affinity=affinity, t=t, assign=assign, repeats=repeats, base_seed=seed,
        beta=beta, input_path=input_path, labels_path=labels_path,
    )
    reports = sweep_k(config, k)
    for rep in reports:
        click.echo(f"k={rep.config['k']}: V={rep.v_mean:.4f} "
                   f"(components={rep.components['num_components']})")
    _emit(sweep_to_dict(reports, include_timings=timings), out)


@cli.command()
@_input_opt
@click.option("--labels", "labels_path", required=True)
@click.option("--clusters", type=int, required=True)
@click.option("--repeats", default=1, show_default=True)
@_seed_opt
@click.option("--beta", default=1.0, show_default=True)
@click.option("--timings/--no-timings", default=True)
@_out_opt
def baseline(input_path, labels_path, clusters, repeats, seed, beta, timings,
             out):
    """k-means on the raw high-dimensional vectors, scored like the pipeline."""
    data = load_dataset(input_path, labels_path)
    report = baseline_kmeans_hd(data, clusters, seed=seed, repeats=repeats,
                                beta=beta)
    _emit(report.to_dict(include_timings=timings), out)


@cli.command()
@click.option("--input", "input_path", default=None,
              help="Embedding file (to build a graph on the fly).")
@click.option("--graph", "graph_path", default=None,
              help="Previously saved graph edge list.")
@_labels_opt
@click.option("--texts", "texts_path", default=None,
              help="Raw texts, one document per line, for length statistics.")
@click.option("--method", default="inc_knn",
              type=click.Choice(["knn", "inc_knn", "epsilon", "knn_mst",
                                 "inc_knn_mst"]))
@click.option("--k", type=int, default=None)
@click.option("--epsilon", type=float, default=None)
@_metric_opt
@_seed_opt
@click.option("--target-halfwidth", default=0.005, show_default=True,
              help="95% CI half-width for sampled statistics on large graphs.")
@_out_opt
def stats(input_path, graph_path, labels_path, texts_path, method, k, epsilon,
          metric, seed, target_halfwidth, out):
    """Graph statistics (density, assortativity, clustering, PageRank...)."""
    if graph_path is not None:
        graph = load_graph(graph_path)
    elif input_path is not None:
        data = load_dataset(input_path)
        graph = build_graph(data, method, k=k, epsilon=epsilon, metric=metric,
                            ordering_seed=seed if "inc" in method else None)
    else:
        raise ParameterError("supply --graph or --input")
    labels = None
    if labels_path is not None:
        from .vectorstore import read_labels

        labels = read_labels(labels_path)
        if len(labels) != graph.n:
            raise ParameterError(
                f"{len(labels)} labels for a graph of {graph.n} nodes"
            )
    texts = read_texts(texts_path) if texts_path else None
    report = estimate_stats_mc(graph, labels=labels, seed=seed,
                               target_halfwidth=target_halfwidth, texts=texts)
    _emit(report.to_dict(), out)


@cli.command()
@click.argument("reports", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@_out_opt
def merge(reports, out):
    """Average V/h/c over reports from partitions of the same source."""
    loaded = [json.loads(Path(p).read_text(encoding="utf-8")) for p in reports]
    _emit(merge_reports(loaded), out)


@cli.command()
@click.option("--n", default=600, show_default=True)
@click.option("--dim", default=16, show_default=True)
@click.option("--blobs", default=3, show_default=True)
@click.option("--separation", default=6.0, show_default=True)
@click.option("--outliers", default=0.0, show_default=True,
              help="Fraction of uniform box noise.")
@_seed_opt
@click.option("--out", required=True, help="Embedding output path.")
@click.option("--labels-out", default=None,
              help="Label output path (default <out>.labels).")
def synth(n, dim, blobs, separation, outliers, seed, out, labels_out):
    """Generate a labeled Gaussian-blob corpus for desk-scale experiments."""
    data = make_blob_dataset(n=n, dim=dim, blobs=blobs, separation=separation,
                             seed=seed, outlier_fraction=outliers)
    write_embeddings(data, out)
    write_labels(data.labels, labels_out or f"{out}.labels")
    click.echo(f"wrote {out}: n={data.n} dim={data.dim} blobs={blobs}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 2
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except ParameterError as exc:
        click.echo(f"parameter error: {exc}", err=True)
        return 2
    except DataError as exc:
        click.echo(f"data error: {exc}", err=True)
        return 3
    except OSError as exc:
        click.echo(f"data error: {exc}", err=True)
        return 3
    except NumericalError as exc:
        click.echo(f"numerical error: {exc}", err=True)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
