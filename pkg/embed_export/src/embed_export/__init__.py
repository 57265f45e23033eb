"""Corpus-to-embeddings export tool.

Fetches a text dataset, applies the newsgroup-style preprocessing, encodes
every document with a sentence-embedding model, and writes an EMB1 matrix,
aligned labels, and a JSON manifest that records the model name,
preprocessing flags, and a corpus digest.
"""

from .corpus import Corpus, available_datasets, fetch_corpus, register_dataset
from .encoders import DEFAULT_MODEL, MODEL_DIMENSIONS, SentenceTransformerEncoder
from .errors import (
    DimensionMismatchError,
    ExportError,
    FetchError,
    FormatError,
    ParameterError,
)
from .jobs import ExportJob, ExportResult, corpus_digest, export

__all__ = [
    "Corpus",
    "DEFAULT_MODEL",
    "DimensionMismatchError",
    "ExportError",
    "ExportJob",
    "ExportResult",
    "FetchError",
    "FormatError",
    "MODEL_DIMENSIONS",
    "ParameterError",
    "SentenceTransformerEncoder",
    "available_datasets",
    "corpus_digest",
    "export",
    "fetch_corpus",
    "register_dataset",
]
