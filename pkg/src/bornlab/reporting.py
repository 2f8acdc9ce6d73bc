"""Deterministic result writers: delimited tables and a JSON run manifest.

Floats are serialized with 17 significant digits so identical runs produce
byte-identical tables.  The manifest echoes the full configuration and is
the only file carrying a timestamp.
"""
from __future__ import annotations

import csv
import json
from datetime import datetime, timezone
from pathlib import Path

__all__ = ["format_value", "write_manifest", "write_table"]


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_table(path: Path, header: list[str], rows: list[dict], fmt: str):
    """Write rows (dicts keyed by header) as CSV or a JSON array."""
    missing = [h for row in rows for h in header if h not in row]
    if missing:
        raise ValueError(f"rows missing columns: {sorted(set(missing))}")
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_value(row[h]) for h in header])
    elif fmt == "json":
        payload = [{h: row[h] for h in header} for row in rows]
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        raise ValueError(f"unknown output format {fmt!r}")


def write_manifest(path: Path, command: str, config: dict, outputs: dict,
                   summary: dict):
    manifest = {
        "command": command,
        "generated_at": datetime.now(timezone.utc).isoformat(),
        "config": config,
        "outputs": outputs,
        "summary": summary,
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True, default=format_value)
        fh.write("\n")
    return manifest
