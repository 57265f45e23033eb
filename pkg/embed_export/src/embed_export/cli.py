"""Command-line interface for corpus export.

Exits 0 on success, 2 on parameter errors, 3 on fetch/data errors, and 4
when the encoder's output width disagrees with the model card.
"""

from __future__ import annotations

import sys

import click

from .corpus import available_datasets
from .encoders import DEFAULT_MODEL
from .errors import DimensionMismatchError, FetchError, FormatError, ParameterError
from .jobs import ExportJob, export


@click.group()
def cli():
    """Turn text corpora into EMB1 embedding matrices with aligned labels."""


@cli.command()
@click.option("--dataset", required=True, help="Dataset id (see `datasets`).")
@click.option("--variant", required=True, type=click.Choice(["s2s", "p2p"]),
              help="Titles only (s2s) or title+body (p2p).")
@click.option("--out", "out_dir", required=True,
              help="Output directory; created if missing.")
@click.option("--model", default=DEFAULT_MODEL, show_default=True,
              help="Sentence-embedding model name.")
@click.option("--cap", default=None, type=int,
              help="Export at most this many documents.")
@click.option("--batch-size", default=256, show_default=True)
@click.option("--texts/--no-texts", "include_texts", default=False,
              help="Also write texts.txt, one document per line.")
def run(dataset, variant, out_dir, model, cap, batch_size, include_texts):
    """Fetch, preprocess, encode, and write embeddings + labels + manifest."""
    job = ExportJob(dataset=dataset, variant=variant, out_dir=out_dir,
                    model=model, cap=cap, batch_size=batch_size,
                    include_texts=include_texts)
    result = export(job)
    click.echo(
        f"wrote {result.embeddings_path}: n={result.num_documents} "
        f"dim={result.dimension}"
    )
    click.echo(f"corpus sha256 {result.corpus_sha256}")


@cli.command()
def datasets():
    """List the dataset ids this tool knows how to fetch."""
    for name in available_datasets():
        click.echo(name)


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
    except (FetchError, FormatError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 3
    except OSError as exc:
        click.echo(f"data error: {exc}", err=True)
        return 3
    except DimensionMismatchError as exc:
        click.echo(f"dimension error: {exc}", err=True)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
