"""Deterministic CSV emission for interference patterns and reports.

Dialect: comma separator, '.' decimal point, '#'-prefixed metadata header
lines of the form ``# key = value`` (scene hash and axis units are
mandatory), then a column-header row, then ``%.12e``-formatted data rows.
Byte-identical output for identical inputs: no timestamps, no unordered
iteration.
"""

from __future__ import annotations

import io
from typing import Optional

import numpy as np

from .propagation import InterferencePattern

FORMAT_TAG = "qgallery-pattern v1"


class CSVFormatError(ValueError):
    """Malformed pattern CSV."""


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12e}"
    return str(value)


def write_pattern(
    path,
    pattern: InterferencePattern,
    scene_hash: str,
    value_unit: str = "1/(m s)",
    extra_metadata: Optional[dict] = None,
) -> None:
    """Write one pattern; metadata keys are emitted in sorted order."""
    meta = {
        "format": FORMAT_TAG,
        "scene_hash": scene_hash,
        "axis": pattern.axis_name,
        "axis_unit": "m",
        "v_unit": "m/s",
        "value_unit": value_unit,
    }
    for key, value in (pattern.metadata or {}).items():
        meta.setdefault(str(key), value)
    if extra_metadata:
        for key, value in extra_metadata.items():
            meta[str(key)] = value

    buf = io.StringIO()
    for key in sorted(meta):
        buf.write(f"# {key} = {_fmt(meta[key])}\n")
    buf.write(f"v_m_s,{pattern.axis_name}_m,flux\n")
    for i, v in enumerate(pattern.v):
        row_v = f"{float(v):.12e}"
        vals = pattern.values[i]
        for x, f in zip(pattern.axis, vals):
            buf.write(f"{row_v},{x:.12e},{f:.12e}\n")
    with open(path, "w", newline="\n") as fh:
        fh.write(buf.getvalue())


def read_pattern(path) -> InterferencePattern:
    """Parse a pattern CSV back into an InterferencePattern.

    Requires the scene hash and unit metadata (same refusal rule the
    figure renderer applies)."""
    meta: dict = {}
    header = None
    rows: list = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.rstrip("\n")
            if not text:
                continue
            if text.startswith("#"):
                body = text[1:].strip()
                if "=" not in body:
                    raise CSVFormatError(f"{path}:{lineno}: metadata line without '='")
                key, _, value = body.partition("=")
                meta[key.strip()] = value.strip()
                continue
            if header is None:
                header = text.split(",")
                if len(header) != 3:
                    raise CSVFormatError(
                        f"{path}:{lineno}: expected 3 columns, got {len(header)}"
                    )
                continue
            parts = text.split(",")
            if len(parts) != 3:
                raise CSVFormatError(f"{path}:{lineno}: expected 3 fields")
            try:
                rows.append(tuple(float(p) for p in parts))
            except ValueError:
                raise CSVFormatError(f"{path}:{lineno}: non-numeric field") from None
    for required in ("scene_hash", "axis", "axis_unit", "value_unit"):
        if required not in meta:
            raise CSVFormatError(f"{path}: missing required metadata key {required!r}")
    if header is None or not rows:
        raise CSVFormatError(f"{path}: no data rows")

    arr = np.asarray(rows)
    v_sorted = np.unique(arr[:, 0])
    axis = arr[arr[:, 0] == v_sorted[0], 1]
    values = np.empty((len(v_sorted), len(axis)))
    for i, v in enumerate(v_sorted):
        block = arr[arr[:, 0] == v]
        if block.shape[0] != len(axis) or not np.array_equal(block[:, 1], axis):
            raise CSVFormatError(f"{path}: velocity blocks use different axes")
        values[i] = block[:, 2]
    return InterferencePattern(
        axis=axis,
        v=v_sorted,
        values=values,
        axis_name=meta["axis"],
        metadata=meta,
    )


def write_report(path, items: dict) -> None:
    """key=value report (sorted keys, deterministic formatting)."""
    with open(path, "w", newline="\n") as fh:
        for key in sorted(items):
            fh.write(f"{key}={_fmt(items[key])}\n")
