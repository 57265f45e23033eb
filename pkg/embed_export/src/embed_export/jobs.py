"""Export jobs: fetch a corpus, encode it, and write the output bundle.

A completed export directory holds ``embeddings.bin`` (EMB1),
``labels.txt`` (one label per row), ``manifest.json``, and optionally
``texts.txt``.  The manifest is written last, so its presence marks a
complete export; an aborted run leaves no manifest behind.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import VARIANTS, fetch_corpus
from .encoders import MODEL_DIMENSIONS, DEFAULT_MODEL, load_encoder
from .errors import DimensionMismatchError, ParameterError
from .fileio import write_json, write_labels, write_matrix, write_texts

MANIFEST_VERSION = 1


@dataclass
class ExportJob:
    """Everything needed to reproduce an export.

    ``cap`` bounds the number of documents (the first ``cap`` in corpus
    order are kept); ``None`` exports the whole corpus.
    """

    dataset: str
    variant: str
    out_dir: str | Path
    model: str = DEFAULT_MODEL
    cap: int | None = None
    batch_size: int = 256
    include_texts: bool = False

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ParameterError(
                f"unknown variant {self.variant!r}; expected one of {VARIANTS}"
            )
        if self.cap is not None and self.cap < 1:
            raise ParameterError(f"cap must be at least 1, got {self.cap}")
        if self.batch_size < 1:
            raise ParameterError(f"batch size must be at least 1, got {self.batch_size}")


@dataclass
class ExportResult:
    embeddings_path: Path
    labels_path: Path
    manifest_path: Path
    texts_path: Path | None
    num_documents: int
    dimension: int
    corpus_sha256: str


def corpus_digest(texts: list[str], labels: list[str]) -> str:
    """SHA-256 over the exported documents and labels, in order.

    Each field is length-prefixed before hashing so the digest binds the
    exact document/label boundaries, not just the concatenated bytes.
    """
    digest = hashlib.sha256()
    for text, label in zip(texts, labels):
        for part in (text, label):
            raw = part.encode("utf-8")
            digest.update(struct.pack("<Q", len(raw)))
            digest.update(raw)
    return digest.hexdigest()


def _encode_all(encoder, texts: list[str], batch_size: int) -> np.ndarray:
    """Encode in batches, checking the vector width as soon as it is known."""
    expected = MODEL_DIMENSIONS.get(encoder.name)
    chunks: list[np.ndarray] = []
    width = None
    for start in range(0, len(texts), batch_size):
        chunk = np.asarray(encoder.encode(texts[start:start + batch_size]),
                           dtype=np.float32)
        if chunk.ndim != 2:
            raise DimensionMismatchError(
                f"encoder returned a {chunk.ndim}-D array, expected 2-D"
            )
        if width is None:
            width = chunk.shape[1]
            if expected is not None and width != expected:
                raise DimensionMismatchError(
                    f"model {encoder.name!r} should produce {expected}-wide "
                    f"vectors but produced {width}"
                )
        elif chunk.shape[1] != width:
            raise DimensionMismatchError(
                f"vector width changed from {width} to {chunk.shape[1]} "
                f"at document {start}"
            )
        chunks.append(chunk)
    return np.vstack(chunks)


def export(job: ExportJob, encoder=None) -> ExportResult:
    """Run ``job`` and return the paths written.

    ``encoder`` defaults to the sentence-transformers wrapper for
    ``job.model``; anything with a ``name`` and an ``encode(texts)`` method
    works.  Output files are written atomically, manifest last.
    """
    corpus = fetch_corpus(job.dataset, job.variant)
    texts = corpus.texts[: job.cap] if job.cap is not None else corpus.texts
    labels = corpus.labels[: len(texts)]
    digest = corpus_digest(texts, labels)

    if encoder is None:
        encoder = load_encoder(job.model)
    vectors = _encode_all(encoder, texts, job.batch_size)

    out_dir = Path(job.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    embeddings_path = out_dir / "embeddings.bin"
    labels_path = out_dir / "labels.txt"
    manifest_path = out_dir / "manifest.json"
    texts_path = out_dir / "texts.txt" if job.include_texts else None

    write_matrix(vectors, embeddings_path)
    write_labels(labels, labels_path)
    if texts_path is not None:
        write_texts(texts, texts_path)

    manifest = {
        "format_version": MANIFEST_VERSION,
        "dataset": corpus.name,
        "variant": corpus.variant,
        "model": encoder.name,
        "num_documents": int(vectors.shape[0]),
        "dimension": int(vectors.shape[1]),
        "cap": job.cap,
        "corpus_sha256": digest,
        "preprocessing": corpus.preprocessing,
        "normalized": False,
        "files": {
            "embeddings": embeddings_path.name,
            "labels": labels_path.name,
            "texts": texts_path.name if texts_path is not None else None,
        },
    }
    write_json(manifest, manifest_path)

    return ExportResult(
        embeddings_path=embeddings_path,
        labels_path=labels_path,
        manifest_path=manifest_path,
        texts_path=texts_path,
        num_documents=int(vectors.shape[0]),
        dimension=int(vectors.shape[1]),
        corpus_sha256=digest,
    )
