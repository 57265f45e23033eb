"""Sentence-embedding model wrapper.

An encoder is anything with a ``name`` attribute and an
``encode(texts) -> ndarray`` method; the exporter feeds it batches and
never touches the model library directly, so tests can substitute a stub.
"""

from __future__ import annotations

import numpy as np

from .errors import FetchError

DEFAULT_MODEL = "all-MiniLM-L12-v2"

# Output widths from the published model cards; exports with these models
# abort unless the encoder agrees.
MODEL_DIMENSIONS = {
    "all-MiniLM-L6-v2": 384,
    "all-MiniLM-L12-v2": 384,
    "all-mpnet-base-v2": 768,
    "all-distilroberta-v1": 768,
    "paraphrase-MiniLM-L6-v2": 384,
}


class SentenceTransformerEncoder:
    """Encode with a sentence-transformers model, unnormalized."""

    def __init__(self, model_name: str = DEFAULT_MODEL):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise FetchError("model", model_name,
                             f"sentence-transformers is not installed ({exc})") from exc
        try:
            self._model = SentenceTransformer(model_name)
        except Exception as exc:
            raise FetchError("model", model_name, str(exc)) from exc
        self.name = model_name

    def encode(self, texts: list[str]) -> np.ndarray:
        vectors = self._model.encode(
            list(texts),
            batch_size=min(64, len(texts)),
            convert_to_numpy=True,
            normalize_embeddings=False,
            show_progress_bar=False,
        )
        return np.asarray(vectors, dtype=np.float32)


def load_encoder(model_name: str) -> SentenceTransformerEncoder:
    """Instantiate the default encoder; the CLI's injection point."""
    return SentenceTransformerEncoder(model_name)
