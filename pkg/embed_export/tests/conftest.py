"""Shared fixtures: a deterministic stub encoder and a registered toy dataset."""

import hashlib
import types

import numpy as np
import pytest

pytest.importorskip("embed_export", reason="install the embed-export package first")

from embed_export import corpus as corpus_mod
from embed_export.corpus import newsgroup_corpus


class StubEncoder:
    """Deterministic stand-in for the sentence-transformers wrapper.

    Each text maps to a vector seeded by its own digest, so equal texts
    encode equally and any corpus change shows up in the matrix — without
    touching the network or a real model.
    """

    def __init__(self, name="stub-model", dimension=16):
        self.name = name
        self.dimension = dimension
        self.batch_sizes = []

    def encode(self, texts):
        self.batch_sizes.append(len(texts))
        rows = np.empty((len(texts), self.dimension), dtype=np.float32)
        for i, text in enumerate(texts):
            seed = int.from_bytes(
                hashlib.sha256(text.encode("utf-8")).digest()[:8], "little"
            )
            rows[i] = np.random.default_rng(seed).standard_normal(self.dimension)
        return rows


_MESSAGES = [
    "From: pat@example.edu\nSubject: Chain skips under load\n\n"
    "My chain skips on the smallest cog when I climb out of the saddle.\n"
    "New cassette, or are the jockey wheels worn down?\n\n--\npat, who walks the hills\n",

    "From: lee@example.com\nSubject: Widget queue overflow at startup\n\n"
    "The ingest queue overflows before the consumer thread is up.\n"
    "Delaying the producer by 50 ms hides it but that cannot be the fix.\n",

    "From: sam@example.org\nSubject: Re: Chain skips under load\n\n"
    "pat@example.edu wrote:\n> New cassette, or are the jockey wheels worn down?\n"
    "Measure the chain first; past one percent stretch the cassette follows it.\n",

    "From: kim@example.com\nSubject: Flashing the widget firmware\n\n"
    "Hold the setup button during power-on and the loader listens on the\n"
    "second serial port at 115200.\n",

    "From: ali@example.net\nSubject: Tubeless at low pressure\n\n"
    "| does it burp on rocky corners?\n"
    "Only when I go below 18 psi with the light casing.\n",

    "From: lee@example.com\nSubject: Re: Widget queue overflow at startup\n\n"
    "kim@example.com writes:\nBounding the queue and blocking the producer "
    "fixed it for us.\nBackpressure beats tuning startup delays.\n",

    "From: pat@example.edu\nSubject: Saddle height rule of thumb\n\n"
    "Heel on the pedal, leg straight at the bottom of the stroke.\n"
    "Then drop a few millimetres if your hips rock.\n\n--\npat\n",

    "From: mor@example.org\nSubject: Widget bus timing margins\n\n"
    "At 66 MHz the setup margin on the address lines is under a nanosecond.\n"
    "We added a wait state rather than respin the board.\n",

    "From: ira@example.com\n\n"
    "Forgot a subject line, sorry. Anyone have the cloth bar tape trick\n"
    "for drop bars that does not need twine?\n",

    "From: kim@example.com\nSubject: Re: Widget bus timing margins\n\n"
    "> We added a wait state rather than respin the board.\n"
    "Same here; the throughput cost was noise in the benchmark.\n",

    "From: ali@example.net\nSubject: Winter commuting setup\n\n"
    "Studded front tyre, fixed gear, drum brake. Ugly and unstoppable.\n",

    "From: mor@example.org\nSubject: Widget watchdog resets\n\n"
    "The watchdog fires during flash erase because the loop stalls.\n"
    "Pet it from the erase callback.\n\n----\nmor | firmware\n",
]

_LABELS = [
    "rec.bicycles", "comp.sys.widgets", "rec.bicycles", "comp.sys.widgets",
    "rec.bicycles", "comp.sys.widgets", "rec.bicycles", "comp.sys.widgets",
    "rec.bicycles", "comp.sys.widgets", "rec.bicycles", "comp.sys.widgets",
]


@pytest.fixture
def make_stub():
    """The stub encoder class, for tests that need custom names or widths."""
    return StubEncoder


@pytest.fixture
def stub_encoder():
    return StubEncoder()


@pytest.fixture
def toy_dataset(monkeypatch):
    """Register a 12-message dataset id and describe it to the test."""

    def fetch(variant):
        return newsgroup_corpus(_MESSAGES, _LABELS, variant)

    monkeypatch.setitem(corpus_mod._REGISTRY, "toy", fetch)
    return types.SimpleNamespace(id="toy", messages=_MESSAGES, labels=_LABELS)
