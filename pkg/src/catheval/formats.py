"""Portable file formats: label/score tables, threshold and split files,
binary tensor dumps, and key=value config files.

Text formats are comma-delimited UTF-8 with Unix newlines. Every writer
round-trips exactly through its parser; floats are written with ``repr`` so
parsing recovers the identical double. All writes are atomic
(write-temp-then-rename).
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .lam import HeadWeights
from .model import (
    GroundTruthMatrix,
    LabelSet,
    PARTITIONS,
    ScoreMatrix,
    SplitAssignment,
    ThresholdVector,
)


class FormatError(ValueError):
    """Malformed input file; carries the 1-based line and column of the first error."""

    def __init__(self, path, line: int, column: int, message: str):
        super().__init__(f"{path}:{line}:{column}: {message}")
        self.path = str(path)
        self.line = line
        self.column = column


def atomic_write_bytes(path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


# --- label / score tables ----------------------------------------------------


def _read_table(path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError(path, 1, 1, "empty file, expected a header row")
    header = lines[0].split(",")
    if header[0] != "image_id":
        raise FormatError(path, 1, 1, f"header must start with 'image_id', got {header[0]!r}")
    if len(header) < 2:
        raise FormatError(path, 1, 1, "header declares no label columns")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise FormatError(
                path, lineno, len(cells) + 1 if len(cells) < len(header) else len(header) + 1,
                f"expected {len(header)} cells, got {len(cells)}",
            )
        rows.append((lineno, cells))
    return header, rows


def parse_labels(path) -> GroundTruthMatrix:
    """Read a binary label table; the header defines the label order."""
    header, rows = _read_table(path)
    labels = LabelSet(tuple(header[1:]))
    ids: list[str] = []
    seen: set[str] = set()
    values = np.zeros((len(rows), labels.k), dtype=np.int8)
    for r, (lineno, cells) in enumerate(rows):
        if cells[0] in seen:
            raise FormatError(path, lineno, 1, f"duplicate image id {cells[0]!r}")
        seen.add(cells[0])
        ids.append(cells[0])
        for c, cell in enumerate(cells[1:], start=2):
            if cell == "0":
                values[r, c - 2] = 0
            elif cell == "1":
                values[r, c - 2] = 1
            else:
                raise FormatError(path, lineno, c, f"label cell must be 0 or 1, got {cell!r}")
    return GroundTruthMatrix(tuple(ids), values, labels)


def write_labels(truth: GroundTruthMatrix, path) -> None:
    out = ["image_id," + ",".join(truth.labels.names)]
    for i, row in zip(truth.image_ids, truth.values):
        out.append(i + "," + ",".join(str(int(v)) for v in row))
    atomic_write_text(path, "\n".join(out) + "\n")


def parse_scores(path) -> ScoreMatrix:
    """Read a probability table of the same shape as a label table."""
    header, rows = _read_table(path)
    labels = LabelSet(tuple(header[1:]))
    ids: list[str] = []
    seen: set[str] = set()
    values = np.zeros((len(rows), labels.k), dtype=np.float64)
    for r, (lineno, cells) in enumerate(rows):
        if cells[0] in seen:
            raise FormatError(path, lineno, 1, f"duplicate image id {cells[0]!r}")
        seen.add(cells[0])
        ids.append(cells[0])
        for c, cell in enumerate(cells[1:], start=2):
            try:
                v = float(cell)
            except ValueError:
                raise FormatError(path, lineno, c, f"score cell is not a number: {cell!r}") from None
            if not math.isfinite(v) or not (0.0 <= v <= 1.0):
                raise FormatError(path, lineno, c, f"score {cell!r} outside [0, 1]")
            values[r, c - 2] = v
    return ScoreMatrix(tuple(ids), values, labels)


def write_scores(scores: ScoreMatrix, path) -> None:
    out = ["image_id," + ",".join(scores.labels.names)]
    for i, row in zip(scores.image_ids, scores.scores):
        out.append(i + "," + ",".join(repr(float(v)) for v in row))
    atomic_write_text(path, "\n".join(out) + "\n")


# --- thresholds ---------------------------------------------------------------


def parse_thresholds(path) -> tuple[ThresholdVector, LabelSet]:
    text = Path(path).read_text(encoding="utf-8")
    lines = [l for l in text.split("\n") if l != ""]
    if not lines or lines[0] != "label,threshold":
        raise FormatError(path, 1, 1, "expected header 'label,threshold'")
    names: list[str] = []
    values: list[float] = []
    for lineno, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != 2:
            raise FormatError(path, lineno, 1, f"expected 2 cells, got {len(cells)}")
        try:
            t = float(cells[1])
        except ValueError:
            raise FormatError(path, lineno, 2, f"threshold is not a number: {cells[1]!r}") from None
        if not (0.0 < t < 1.0):
            raise FormatError(path, lineno, 2, f"threshold {cells[1]!r} outside (0, 1)")
        names.append(cells[0])
        values.append(t)
    if not names:
        raise FormatError(path, 2, 1, "no thresholds in file")
    return ThresholdVector(tuple(values)), LabelSet(tuple(names))


def write_thresholds(thresholds: ThresholdVector, labels: LabelSet, path) -> None:
    if thresholds.k != labels.k:
        raise ValueError(f"{thresholds.k} thresholds for {labels.k} labels")
    out = ["label,threshold"]
    out += [f"{n},{repr(t)}" for n, t in zip(labels.names, thresholds.per_label)]
    atomic_write_text(path, "\n".join(out) + "\n")


# --- split assignments --------------------------------------------------------


def parse_split(path) -> SplitAssignment:
    text = Path(path).read_text(encoding="utf-8")
    lines = [l for l in text.split("\n") if l != ""]
    if not lines or not lines[0].startswith("# seed="):
        raise FormatError(path, 1, 1, "expected '# seed=<n>' on the first line")
    try:
        seed = int(lines[0][len("# seed=") :])
    except ValueError:
        raise FormatError(path, 1, 1, "seed is not an integer") from None
    if len(lines) < 2 or lines[1] != "image_id,partition":
        raise FormatError(path, 2, 1, "expected header 'image_id,partition'")
    partition: dict[str, str] = {}
    for lineno, line in enumerate(lines[2:], start=3):
        cells = line.split(",")
        if len(cells) != 2:
            raise FormatError(path, lineno, 1, f"expected 2 cells, got {len(cells)}")
        if cells[1] not in PARTITIONS:
            raise FormatError(path, lineno, 2, f"unknown partition {cells[1]!r}")
        if cells[0] in partition:
            raise FormatError(path, lineno, 1, f"duplicate image id {cells[0]!r}")
        partition[cells[0]] = cells[1]
    return SplitAssignment(partition, seed)


def write_split(split: SplitAssignment, path) -> None:
    out = [f"# seed={split.seed}", "image_id,partition"]
    out += [f"{i},{p}" for i, p in split.partition.items()]
    atomic_write_text(path, "\n".join(out) + "\n")


# --- binary tensor dumps --------------------------------------------------------

_HEADER_KEY_ORDER = ("dtype", "shape", "layout", "byte_order", "labels",
                     "source_image_id", "source_image_size")


def _canonical_header(header: dict) -> str:
    ordered = {k: header[k] for k in _HEADER_KEY_ORDER if k in header}
    extra = sorted(set(header) - set(_HEADER_KEY_ORDER))
    for k in extra:
        ordered[k] = header[k]
    return json.dumps(ordered, separators=(", ", ": ")) + "\n"


def write_tensor(array: np.ndarray, path, **extra) -> None:
    """Write a float32 little-endian tensor with a one-line JSON header.

    ``extra`` may add optional header keys (e.g. ``labels`` for a K x C
    head-weight dump); required keys are always emitted.
    """
    arr = np.ascontiguousarray(np.asarray(array), dtype="<f4")
    header = {
        "dtype": "f32",
        "shape": [int(s) for s in arr.shape],
        "layout": "row-major",
        "byte_order": "little",
    }
    header.update(extra)
    atomic_write_bytes(path, _canonical_header(header).encode("utf-8") + arr.tobytes())


def read_tensor(path) -> tuple[np.ndarray, dict]:
    """Read a tensor dump; returns (array, header)."""
    raw = Path(path).read_bytes()
    nl = raw.find(b"\n")
    if nl < 0:
        raise FormatError(path, 1, 1, "missing newline-terminated header")
    try:
        header = json.loads(raw[:nl].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise FormatError(path, 1, 1, f"bad tensor header: {e}") from None
    for key, expect in (("dtype", "f32"), ("layout", "row-major"), ("byte_order", "little")):
        if header.get(key) != expect:
            raise FormatError(path, 1, 1, f"header {key}={header.get(key)!r}, expected {expect!r}")
    shape = header.get("shape")
    if not isinstance(shape, list) or not all(isinstance(s, int) and s > 0 for s in shape):
        raise FormatError(path, 1, 1, f"bad shape {shape!r}")
    count = int(np.prod(shape))
    body = raw[nl + 1 :]
    if len(body) != 4 * count:
        raise FormatError(
            path, 1, 1, f"body holds {len(body)} bytes, header declares {4 * count}"
        )
    arr = np.frombuffer(body, dtype="<f4").reshape(shape)
    return arr, header


def write_head_weights(weights: HeadWeights, path) -> None:
    write_tensor(weights.weights, path, labels=list(weights.label_names))


def read_head_weights(path) -> HeadWeights:
    arr, header = read_tensor(path)
    if arr.ndim != 2:
        raise FormatError(path, 1, 1, f"head weights must be K x C, got shape {list(arr.shape)}")
    names = header.get("labels")
    if names is None:
        names = [f"label_{i + 1}" for i in range(arr.shape[0])]
    if len(names) != arr.shape[0]:
        raise FormatError(
            path, 1, 1, f"{len(names)} label names for {arr.shape[0]} weight rows"
        )
    return HeadWeights(arr.astype(np.float64), tuple(names))


def tensor_roundtrip_bytes(path) -> bytes:
    """Parse a dump and re-serialize it canonically (byte-identical for
    files produced by `write_tensor`)."""
    arr, header = read_tensor(path)
    return _canonical_header(header).encode("utf-8") + np.ascontiguousarray(
        arr, dtype="<f4"
    ).tobytes()


# --- config files ---------------------------------------------------------------


def parse_config(path) -> dict[str, str]:
    """key=value lines; '#' starts a comment, blank lines are ignored."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").split("\n"), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise FormatError(path, lineno, 1, f"expected key=value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        out[key.strip()] = value.strip()
    return out
