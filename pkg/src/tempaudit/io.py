"""Reading and writing snapshots, manifests, annotations and drift configs.

Snapshot files are CSV with a header ``id,noisy_label,p_<class0>,...``, one
file per timestamp named ``snapshot_<t>.csv``. Noisy labels are written as
class names. Manifests, annotations and configs are JSON.
"""

from __future__ import annotations

import csv
import json
import re
from pathlib import Path
from typing import Mapping

import numpy as np

from .core import Snapshot
from .driftgen import DriftConfig, GeneratedData
from .errors import InvariantViolation, ParseError
from .fairness import LabelSetManifest
from .temporal import SnapshotSeries

SNAPSHOT_RE = re.compile(r"^snapshot_(-?\d+)\.csv$")
PROB_PREFIX = "p_"


def _fmt(x: float) -> str:
    return repr(float(x))


def write_snapshot(s: Snapshot, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "noisy_label"] + [PROB_PREFIX + c for c in s.classes])
        for d, y, row in zip(s.ids, s.noisy_labels, s.prob_matrix):
            w.writerow([d, s.classes[y]] + [_fmt(p) for p in row])


def read_snapshot(path: str | Path, time: int | None = None) -> Snapshot:
    """Parse one snapshot file.

    The time index defaults to the ``<t>`` in ``snapshot_<t>.csv``.
    Raises :class:`ParseError` for malformed text and
    :class:`InvariantViolation` for well-formed data that is not a valid snapshot.
    """
    path = Path(path)
    if time is None:
        match = SNAPSHOT_RE.match(path.name)
        if not match:
            raise ParseError("cannot infer time index from file name; expected snapshot_<t>.csv", path)
        time = int(match.group(1))
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"not UTF-8: {exc}", path) from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        raise ParseError("empty file", path, 1)
    header = [h.strip() for h in rows[0]]
    if header[:2] != ["id", "noisy_label"]:
        raise ParseError("header must start with 'id,noisy_label'", path, 1, 1)
    classes = []
    for col, h in enumerate(header[2:], start=3):
        if not h.startswith(PROB_PREFIX) or len(h) == len(PROB_PREFIX):
            raise ParseError(f"probability column {h!r} must be named p_<class>", path, 1, col)
        classes.append(h[len(PROB_PREFIX):])
    if len(classes) < 2:
        raise ParseError("need at least 2 probability columns", path, 1)
    index = {c: k for k, c in enumerate(classes)}
    ids, labels, probs = [], [], []
    for line, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} fields, found {len(row)}", path, line)
        ids.append(row[0].strip())
        name = row[1].strip()
        if name in index:
            labels.append(index[name])
        elif name.isdigit() and int(name) < len(classes):
            labels.append(int(name))
        else:
            raise InvariantViolation(f"{path}, line {line}: noisy label {name!r} is not one of {classes}")
        values = []
        for col, cell in enumerate(row[2:], start=3):
            try:
                values.append(float(cell))
            except ValueError:
                raise ParseError(f"not a number: {cell!r}", path, line, col) from None
        probs.append(values)
    if not ids:
        raise InvariantViolation(f"{path}: snapshot has no datapoints")
    try:
        return Snapshot(time, ids, labels, np.array(probs), classes)
    except InvariantViolation as exc:
        raise InvariantViolation(f"{path}: {exc}") from None


def write_series(series: SnapshotSeries, directory: str | Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for s in series:
        write_snapshot(s, directory / f"snapshot_{s.time}.csv")


def read_series(directory: str | Path) -> SnapshotSeries:
    directory = Path(directory)
    files = [p for p in directory.iterdir() if SNAPSHOT_RE.match(p.name)]
    if not files:
        raise ParseError("no snapshot_<t>.csv files found", directory)
    return SnapshotSeries.from_snapshots([read_snapshot(p) for p in files])


def _load_json(path: str | Path):
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path, exc.lineno, exc.colno) from None


def dump_json(obj, path: str | Path | None = None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _int_key(key, path) -> int:
    try:
        return int(key)
    except (TypeError, ValueError):
        raise ParseError(f"timestamp key {key!r} is not an integer", path) from None


def read_manifest(path: str | Path) -> LabelSetManifest:
    """``{"<t>": ["label", ...], ...}``"""
    data = _load_json(path)
    if not isinstance(data, dict) or not all(isinstance(v, list) for v in data.values()):
        raise ParseError("manifest must map timestamps to lists of label names", path)
    return LabelSetManifest.from_names({_int_key(t, path): v for t, v in data.items()})


def manifest_to_json(manifest: LabelSetManifest) -> dict:
    return {str(t): list(p.names) for t, p in manifest.partitions.items()}


def read_annotations(path: str | Path) -> dict[int, dict[str, str]]:
    """``{"<t>": {"<id>": "label", ...}, ...}``"""
    data = _load_json(path)
    if not isinstance(data, dict) or not all(isinstance(v, dict) for v in data.values()):
        raise ParseError("annotations must map timestamps to {id: label} objects", path)
    return {_int_key(t, path): {str(k): str(v) for k, v in m.items()} for t, m in data.items()}


def annotations_to_json(truth: Mapping[int, Mapping[str, str]]) -> dict:
    return {str(t): dict(m) for t, m in sorted(truth.items())}


def read_config(path: str | Path) -> DriftConfig:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ParseError("config must be a JSON object", path)
    return DriftConfig.from_dict(data)


def write_generated(data: GeneratedData, directory: str | Path) -> None:
    """Write snapshots, ``annotations.json``, ``manifest.json`` and ``config.json``."""
    directory = Path(directory)
    write_series(data.series, directory)
    dump_json(annotations_to_json(data.truth), directory / "annotations.json")
    dump_json(manifest_to_json(data.manifest), directory / "manifest.json")
    dump_json(data.config.to_dict(), directory / "config.json")
