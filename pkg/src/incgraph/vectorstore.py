"""Embedding-matrix and label I/O.

Binary layout (EMB1): magic bytes ``EMB1``, then the row and column counts
as little-endian uint32, then N*D little-endian float32 values in row-major
order.  The format is deliberately dumb so that any language can produce it.

Text matrices are one row per line with either tab or comma separators;
the separator is sniffed from the first line.  Label files are UTF-8 text,
one label per line.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import FormatError, ValidationError

MAGIC = b"EMB1"
_HEADER = struct.Struct("<4sII")


@dataclass
class VectorDataset:
    """An N x D float32 embedding matrix with optional per-row labels."""

    vectors: np.ndarray
    labels: list[str] | None = None
    name: str = ""
    _label_ids: np.ndarray | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.vectors = np.ascontiguousarray(self.vectors, dtype=np.float32)
        self.validate()

    def validate(self):
        if self.vectors.ndim != 2:
            raise ValidationError(
                f"expected a 2-D matrix, got shape {self.vectors.shape}"
            )
        n, d = self.vectors.shape
        if n < 1 or d < 1:
            raise ValidationError(f"empty dataset (N={n}, D={d}) is not allowed")
        bad = ~np.isfinite(self.vectors)
        if bad.any():
            row = int(np.nonzero(bad.any(axis=1))[0][0])
            raise ValidationError(f"non-finite value in row {row}")
        if self.labels is not None and len(self.labels) != n:
            raise ValidationError(
                f"label count {len(self.labels)} != row count {n}"
            )

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def label_ids(self) -> np.ndarray:
        """Dense integer ids for the labels, assigned in first-appearance order."""
        if self.labels is None:
            raise ValidationError("dataset has no labels")
        if self._label_ids is None:
            self._label_ids = assign_label_ids(self.labels)
        return self._label_ids

    @property
    def num_classes(self) -> int:
        return int(self.label_ids().max()) + 1


def assign_label_ids(labels: list[str]) -> np.ndarray:
    mapping: dict[str, int] = {}
    ids = np.empty(len(labels), dtype=np.int64)
    for i, lab in enumerate(labels):
        if lab not in mapping:
            mapping[lab] = len(mapping)
        ids[i] = mapping[lab]
    return ids


def write_embeddings(dataset: VectorDataset, path: str | Path) -> None:
    """Write ``dataset.vectors`` to ``path`` in the EMB1 binary format."""
    dataset.validate()
    n, d = dataset.vectors.shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, n, d))
        fh.write(dataset.vectors.astype("<f4", copy=False).tobytes())


def read_embeddings(path: str | Path, format: str = "binary") -> VectorDataset:
    """Read an embedding matrix from ``path``.

    ``format`` is ``"binary"`` (EMB1) or ``"tsv"`` (tab- or comma-separated
    text, sniffed per file).
    """
    path = Path(path)
    if format == "binary":
        vectors = _read_binary(path)
    elif format == "tsv":
        vectors = _read_tsv(path)
    else:
        raise FormatError(f"unknown embedding format {format!r}")
    return VectorDataset(vectors=vectors, name=path.stem)


def _read_binary(path: Path) -> np.ndarray:
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError(f"{path}: file too short for an EMB1 header")
    magic, n, d = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic bytes {magic!r}")
    expected = _HEADER.size + 4 * n * d
    if len(data) != expected:
        raise FormatError(
            f"{path}: expected {expected} bytes for N={n}, D={d}, got {len(data)}"
        )
    vectors = np.frombuffer(data, dtype="<f4", offset=_HEADER.size)
    return vectors.reshape(n, d).copy()


def _read_tsv(path: Path) -> np.ndarray:
    text = path.read_text(encoding="utf-8")
    lines = [ln for ln in text.split("\n") if ln.strip() != ""]
    if not lines:
        raise FormatError(f"{path}: no rows")
    sep = "\t" if "\t" in lines[0] else ","
    rows = []
    width = None
    for i, ln in enumerate(lines):
        parts = ln.split(sep)
        if width is None:
            width = len(parts)
        elif len(parts) != width:
            raise FormatError(
                f"{path}: row {i} has {len(parts)} columns, expected {width}"
            )
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise FormatError(f"{path}: row {i}: {exc}") from exc
    return np.asarray(rows, dtype=np.float32)


def read_labels(path: str | Path) -> list[str]:
    """Read one label per line; blank interior lines are rejected."""
    text = Path(path).read_text(encoding="utf-8")
    if text.endswith("\n"):
        text = text[:-1]
    if text == "":
        raise ValidationError(f"{path}: empty label file")
    labels = text.split("\n")
    for i, lab in enumerate(labels):
        if lab.strip() == "":
            raise ValidationError(f"{path}: blank label on line {i + 1}")
    return labels


def write_labels(labels: list[str], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for lab in labels:
            fh.write(lab + "\n")


def read_texts(path: str | Path) -> list[str]:
    """Read raw document texts, one document per line (blank lines allowed)."""
    text = Path(path).read_text(encoding="utf-8")
    if text.endswith("\n"):
        text = text[:-1]
    return text.split("\n") if text != "" else []
