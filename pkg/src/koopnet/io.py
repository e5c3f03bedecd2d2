"""CSV readers/writers for simulation and analysis artifacts.

All files are comma-delimited UTF-8 with LF line endings, a header row,
and optional '#'-prefixed comment lines (ignored on read). Floats are
written with shortest round-trip decimal formatting so identical runs
produce byte-identical files and reads reproduce binary64 values
exactly. Every file is written atomically (temp file + rename).
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import KoopnetError
from .ifo import AvalancheRecord
from .snapshots import SnapshotMatrix


class FileFormatError(KoopnetError, ValueError):
    """A CSV artifact does not parse; carries the offending line number."""


def _fmt(value: float) -> str:
    # repr() of a Python float is the shortest decimal that round-trips.
    return repr(float(value))


def atomic_write_text(path: Path, text: str) -> None:
    """Write a file via temp-and-rename so readers never see a partial
    artifact."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: Path, header: list[str], rows: Iterable[Iterable]) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            _fmt(v) if isinstance(v, float) else str(v) for v in row
        ))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_snapshots(path: Path, snapshots: SnapshotMatrix) -> None:
    labels = snapshots.node_labels()
    write_csv(path, labels, ([float(v) for v in row] for row in snapshots.data))


def read_snapshots(path: Path, dt: float = 1.0) -> SnapshotMatrix:
    """Parse a snapshots CSV back into a matrix; `dt` is supplied by the
    caller (it lives in meta.csv, not in the snapshot file)."""
    labels = None
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            if labels is None:
                labels = line.split(",")
                continue
            fields = line.split(",")
            if len(fields) != len(labels):
                raise FileFormatError(
                    f"{path}:{lineno}: expected {len(labels)} fields, got {len(fields)}"
                )
            try:
                rows.append([float(v) for v in fields])
            except ValueError as exc:
                raise FileFormatError(f"{path}:{lineno}: {exc}") from None
    if labels is None or not rows:
        raise FileFormatError(f"{path}: no data rows")
    return SnapshotMatrix(data=np.array(rows), dt=dt, labels=labels)


def write_ifo_events(path: Path, records: list[AvalancheRecord]) -> None:
    rows = [
        (float(r.start_time), r.size, ";".join(str(i) for i in sorted(r.participants)))
        for r in records
    ]
    write_csv(path, ["start_time", "size", "participants"], rows)


def write_bs_events(path: Path, min_history: list[int]) -> None:
    write_csv(path, ["iteration", "min_index"],
              ((k, i) for k, i in enumerate(min_history)))


def write_meta(path: Path, meta: dict) -> None:
    rows = []
    for key, value in meta.items():
        rows.append((key, _fmt(value) if isinstance(value, float) else str(value)))
    write_csv(path, ["key", "value"], rows)


def read_meta(path: Path) -> dict[str, str]:
    meta: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line or line.startswith("#") or lineno == 1 and line == "key,value":
                continue
            key, _, value = line.partition(",")
            meta[key] = value
    return meta
