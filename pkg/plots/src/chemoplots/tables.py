"""Readers for the solver's CSV formats.

Snapshot files: '#'-prefixed comment lines (key = value, including time),
then a header row, then comma-separated data.  Study tables: same comment
convention with columns k,eps,E_L1,E_Linf.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

COLUMNS_1D = ("x", "n", "q", "N1", "Q1")
COLUMNS_2D = ("x", "y", "n", "q1", "q2", "N1", "Q1x", "Q1y")
COLUMNS_STUDY = ("k", "eps", "E_L1", "E_Linf")


class SchemaError(ValueError):
    """A CSV file does not match the declared schema."""


def _read_csv(path: Path):
    """Returns (metadata dict from comments, column names, data rows)."""
    meta: dict[str, str] = {}
    header: list[str] | None = None
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if "=" in body:
                    key, _, val = body.partition("=")
                    meta[key.strip()] = val.strip()
                continue
            if header is None:
                header = [c.strip() for c in line.split(",")]
                continue
            try:
                rows.append([float(v) for v in line.split(",")])
            except ValueError as exc:
                raise SchemaError(f"{path}: line {lineno}: bad data row") from exc
    if header is None:
        raise SchemaError(f"{path}: empty file (no header row)")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    widths = {len(r) for r in rows}
    if widths != {len(header)}:
        raise SchemaError(f"{path}: row width differs from header "
                          f"({sorted(widths)} vs {len(header)})")
    return meta, header, np.asarray(rows, dtype=float)


def _as_columns(path: Path, header, data, required) -> dict[str, np.ndarray]:
    for col in required:
        if col not in header:
            raise SchemaError(f"{path}: missing column: {col}")
    return {col: data[:, header.index(col)] for col in header}


def read_snapshot(path: str | Path, two_d: bool = False):
    """Load one snapshot; returns (time or None, dict of column arrays)."""
    path = Path(path)
    meta, header, data = _read_csv(path)
    required = COLUMNS_2D if two_d else COLUMNS_1D
    cols = _as_columns(path, header, data, required)
    t = float(meta["time"]) if "time" in meta else None
    return t, cols


def read_study(path: str | Path):
    """Load a study table; returns a dict of column arrays."""
    path = Path(path)
    _, header, data = _read_csv(path)
    return _as_columns(path, header, data, COLUMNS_STUDY)
