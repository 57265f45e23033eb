"""On-disk formats written by the exporter.

Embedding matrices use the EMB1 layout: magic bytes ``EMB1``, row and
column counts as little-endian uint32, then N*D little-endian float32
values in row-major order.  Labels and raw texts are UTF-8 text with one
entry per line.  Every writer goes through an atomic temp-file rename so
a crash never leaves a half-written file behind.
"""

from __future__ import annotations

import json
import os
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError

MAGIC = b"EMB1"
_HEADER = struct.Struct("<4sII")


def _write_atomic(path: Path, payload: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_bytes(payload)
        os.replace(tmp, path)
    finally:
        tmp.unlink(missing_ok=True)


def write_matrix(vectors: np.ndarray, path: str | Path) -> None:
    """Write a 2-D float array to ``path`` in the EMB1 binary format."""
    vectors = np.asarray(vectors, dtype="<f4")
    if vectors.ndim != 2:
        raise FormatError(f"expected a 2-D matrix, got shape {vectors.shape}")
    n, d = vectors.shape
    if n < 1 or d < 1:
        raise FormatError(f"refusing to write an empty matrix (N={n}, D={d})")
    if not np.isfinite(vectors).all():
        row = int(np.nonzero(~np.isfinite(vectors).all(axis=1))[0][0])
        raise FormatError(f"non-finite embedding value in row {row}")
    payload = _HEADER.pack(MAGIC, n, d) + np.ascontiguousarray(vectors).tobytes()
    _write_atomic(Path(path), payload)


def read_matrix(path: str | Path) -> np.ndarray:
    """Read an EMB1 file back; used for post-write verification and tests."""
    data = Path(path).read_bytes()
    if len(data) < _HEADER.size:
        raise FormatError(f"{path}: file too short for an EMB1 header")
    magic, n, d = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic bytes {magic!r}")
    if len(data) != _HEADER.size + 4 * n * d:
        raise FormatError(f"{path}: payload does not match N={n}, D={d}")
    vectors = np.frombuffer(data, dtype="<f4", offset=_HEADER.size)
    return vectors.reshape(n, d).copy()


def write_labels(labels: list[str], path: str | Path) -> None:
    """Write one label per line; labels must be non-blank single lines."""
    for i, lab in enumerate(labels):
        if "\n" in lab or "\r" in lab:
            raise FormatError(f"label {i} contains a line break: {lab!r}")
        if lab.strip() == "":
            raise FormatError(f"label {i} is blank")
    text = "".join(lab + "\n" for lab in labels)
    _write_atomic(Path(path), text.encode("utf-8"))


def write_texts(texts: list[str], path: str | Path) -> None:
    """Write one document per line, flattening internal line breaks to spaces.

    The flattening keeps the file readable by line-oriented consumers; word
    counts are unaffected.
    """
    flattened = (" ".join(doc.split("\n")).replace("\r", " ") for doc in texts)
    text = "".join(doc + "\n" for doc in flattened)
    _write_atomic(Path(path), text.encode("utf-8"))


def write_json(payload: dict, path: str | Path) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    _write_atomic(Path(path), text.encode("utf-8"))
