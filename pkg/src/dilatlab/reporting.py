"""Deterministic CSV and JSON writers used by the command-line front end."""

from __future__ import annotations

import json
import math
from pathlib import Path

from . import __version__

__all__ = ["fmt", "header_line", "write_csv", "write_json"]


def fmt(v) -> str:
    """17 significant digits for floats, locale independent."""
    if hasattr(v, "item") and callable(v.item):  # numpy scalars
        v = v.item()
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    if v is None:
        return ""
    return str(v)


def header_line(sha256: str) -> str:
    return f"# dilatlab {__version__} config_sha256={sha256}"


def write_csv(path, columns, rows, sha256: str) -> Path:
    path = Path(path)
    lines = [header_line(sha256), ",".join(columns)]
    for r in rows:
        lines.append(",".join(_csv_cell(fmt(v)) for v in r))
    path.write_text("\n".join(lines) + "\n")
    return path


def _csv_cell(s: str) -> str:
    if any(ch in s for ch in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def _clean(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalars
        return _clean(obj.item())
    return obj


def write_json(path, payload: dict, sha256: str) -> Path:
    path = Path(path)
    doc = {"meta": {"tool": "dilatlab", "version": __version__, "config_sha256": sha256}}
    doc.update(_clean(payload))
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path
