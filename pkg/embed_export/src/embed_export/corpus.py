"""Dataset registry and fetchers.

A fetcher takes a variant (``s2s`` or ``p2p``) and returns a ``Corpus``
whose texts are final model input.  The 20 Newsgroups fetcher downloads
the classic test split and assembles both variants from subjects and
cleaned bodies; the MTEB clustering fetchers download whichever upstream
set matches the variant.  All network and optional-dependency failures
surface as ``FetchError``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import FetchError, ParameterError
from .textprep import assemble, clean_body, subject_of

VARIANTS = ("s2s", "p2p")


@dataclass
class Corpus:
    """Documents ready for encoding, with row-aligned labels."""

    name: str
    variant: str
    texts: list[str]
    labels: list[str]
    preprocessing: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.texts) != len(self.labels):
            raise ParameterError(
                f"{len(self.texts)} texts but {len(self.labels)} labels"
            )
        if not self.texts:
            raise FetchError("dataset", self.name, "corpus is empty")


def newsgroup_corpus(
    messages: list[str], labels: list[str], variant: str
) -> Corpus:
    """Assemble a corpus from raw newsgroup messages.

    The title is the Subject header; the body is the message with header,
    signature block, and quoted lines removed.  ``s2s`` keeps titles only,
    ``p2p`` joins title and body with a newline.
    """
    if variant not in VARIANTS:
        raise ParameterError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    texts = [
        assemble(subject_of(msg), clean_body(msg), variant) for msg in messages
    ]
    flags = {
        "strip_headers": True,
        "strip_signatures": True,
        "strip_quotes": True,
        "joint": "newline" if variant == "p2p" else None,
    }
    return Corpus("20newsgroups", variant, texts, list(labels), flags)


def _fetch_20newsgroups(variant: str) -> Corpus:
    try:
        from sklearn.datasets import fetch_20newsgroups
    except ImportError as exc:
        raise FetchError("dataset", "20newsgroups",
                         f"scikit-learn is not installed ({exc})") from exc
    try:
        raw = fetch_20newsgroups(subset="test", remove=(), shuffle=False)
    except Exception as exc:
        raise FetchError("dataset", "20newsgroups", str(exc)) from exc
    labels = [raw.target_names[t] for t in raw.target]
    return newsgroup_corpus(list(raw.data), labels, variant)


# Upstream set per (dataset, variant); the s2s sets of some sources carry
# no suffix upstream.
_MTEB_SETS = {
    ("arxiv", "s2s"): "mteb/arxiv-clustering-s2s",
    ("arxiv", "p2p"): "mteb/arxiv-clustering-p2p",
    ("biorxiv", "s2s"): "mteb/biorxiv-clustering-s2s",
    ("biorxiv", "p2p"): "mteb/biorxiv-clustering-p2p",
    ("medrxiv", "s2s"): "mteb/medrxiv-clustering-s2s",
    ("medrxiv", "p2p"): "mteb/medrxiv-clustering-p2p",
    ("reddit", "s2s"): "mteb/reddit-clustering",
    ("reddit", "p2p"): "mteb/reddit-clustering-p2p",
    ("stackexchange", "s2s"): "mteb/stackexchange-clustering",
    ("stackexchange", "p2p"): "mteb/stackexchange-clustering-p2p",
}


def _make_mteb_fetcher(dataset: str) -> Callable[[str], Corpus]:
    def fetch(variant: str) -> Corpus:
        if variant not in VARIANTS:
            raise ParameterError(
                f"unknown variant {variant!r}; expected one of {VARIANTS}"
            )
        repo = _MTEB_SETS[(dataset, variant)]
        try:
            from datasets import load_dataset
        except ImportError as exc:
            raise FetchError("dataset", repo,
                             f"the 'datasets' package is not installed ({exc})") from exc
        try:
            rows = load_dataset(repo, split="test")
        except Exception as exc:
            raise FetchError("dataset", repo, str(exc)) from exc
        # Each upstream row is one clustering problem (a sentence list with
        # a parallel label list); the first row is the coarsest partition
        # and the desk-scale subset we export.
        row = rows[0]
        texts = [str(t) for t in row["sentences"]]
        labels = [str(lab) for lab in row["labels"]]
        return Corpus(dataset, variant, texts, labels,
                      {"upstream": repo, "partition": 0})

    return fetch


_REGISTRY: dict[str, Callable[[str], Corpus]] = {
    "20newsgroups": _fetch_20newsgroups,
    **{name: _make_mteb_fetcher(name)
       for name in ("arxiv", "biorxiv", "medrxiv", "reddit", "stackexchange")},
}


def available_datasets() -> list[str]:
    return sorted(_REGISTRY)


def register_dataset(name: str, fetcher: Callable[[str], Corpus]) -> None:
    """Add or replace a dataset fetcher (mainly a seam for tests)."""
    _REGISTRY[name] = fetcher


def fetch_corpus(dataset: str, variant: str) -> Corpus:
    if dataset not in _REGISTRY:
        raise FetchError("dataset", dataset,
                         f"unknown dataset id; known: {', '.join(available_datasets())}")
    return _REGISTRY[dataset](variant)
