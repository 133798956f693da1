"""CSV / JSON table emission with a config-echo header."""

from __future__ import annotations

import hashlib
import json
import math
import sys
from typing import Any, Sequence


def _plain(value: Any) -> Any:
    if isinstance(value, complex):
        return [_plain(value.real), _plain(value.imag)]
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if hasattr(value, "item"):  # numpy scalars
        return _plain(value.item())
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def config_hash(config: dict) -> str:
    blob = json.dumps(_plain(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def format_cell(value: Any) -> str:
    if hasattr(value, "item"):
        value = value.item()
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    return str(value)


def render_csv(columns: Sequence[str], rows: Sequence[Sequence[Any]], config: dict) -> str:
    lines = []
    plain = _plain(config)
    for key in sorted(plain):
        lines.append(f"# {key}: {json.dumps(plain[key], sort_keys=True)}")
    lines.append(f"# config_hash: {config_hash(config)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def render_json(columns: Sequence[str], rows: Sequence[Sequence[Any]], config: dict,
                extra: dict | None = None) -> str:
    doc = {"config": _plain(config), "config_hash": config_hash(config),
           "columns": list(columns), "rows": [_plain(list(r)) for r in rows]}
    if extra:
        doc.update(_plain(extra))
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def write_table(path: str | None, columns, rows, config: dict, fmt: str = "csv",
                extra: dict | None = None) -> None:
    if fmt == "csv":
        text = render_csv(columns, rows, config)
    elif fmt == "json":
        text = render_json(columns, rows, config, extra)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
