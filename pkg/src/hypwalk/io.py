"""Deterministic output formats and the plain key=value config format.

Reports are JSON with sorted keys; point clouds and tables are CSV with a
versioned header comment.  Identical configuration and seed must yield
byte-identical files, so nothing here records wall-clock time.
"""

from __future__ import annotations

import json
from pathlib import Path

CSV_SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


def dump_json(data, path=None) -> str:
    """Canonical JSON rendering (sorted keys, newline-terminated)."""
    text = json.dumps(data, sort_keys=True, indent=2) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def dump_csv(columns, rows, path=None, name="table") -> str:
    """CSV with a schema-version comment line, deterministic formatting."""
    lines = [f"# hypwalk {name} v{CSV_SCHEMA_VERSION}", ",".join(columns)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if hasattr(v, "item"):  # numpy scalars
        return repr(v.item())
    return str(v)


def dump_jsonl(rows, path=None, header=None) -> str:
    """JSON lines, optionally preceded by a metadata header object."""
    out = []
    if header is not None:
        out.append(json.dumps({"meta": header}, sort_keys=True))
    out.extend(json.dumps(r, sort_keys=True) for r in rows)
    text = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def parse_config(text: str) -> dict:
    """Parse 'key = value' lines; '#' starts a comment; values stay strings."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out


def read_config(path) -> dict:
    return parse_config(Path(path).read_text())
