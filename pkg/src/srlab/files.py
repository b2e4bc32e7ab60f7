"""Persistence: probability-distribution JSON files and CSV report files.

Distribution files are versioned JSON whose floats round-trip exactly
(``repr`` serialization), so write -> read -> write is byte-identical.
CSV reports serialize numbers with 17 significant digits in a fixed row
order, which makes equal-seed runs byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .rounding import ProbabilityTable

__all__ = [
    "DIST_FORMAT_VERSION",
    "LoadedDistribution",
    "distribution_payload",
    "write_distribution",
    "read_distribution",
    "format_number",
    "write_csv",
]

DIST_FORMAT_VERSION = 1


@dataclass(frozen=True)
class LoadedDistribution:
    table: ProbabilityTable
    delta: float
    provenance: dict
    format_version: int


def distribution_payload(table: ProbabilityTable, delta: float = 1.0, provenance: dict | None = None) -> dict:
    return {
        "format_version": DIST_FORMAT_VERSION,
        "label": table.label,
        "delta": float(delta),
        "grid": [float(v) for v in table.grid],
        "p": [float(v) for v in table.p],
        "provenance": provenance or {},
    }


def write_distribution(path, table: ProbabilityTable, delta: float = 1.0, provenance: dict | None = None) -> None:
    payload = distribution_payload(table, delta, provenance)
    with open(path, "w", newline="") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_distribution(path) -> LoadedDistribution:
    with open(path) as fh:
        payload = json.load(fh)
    try:
        version = int(payload["format_version"])
        label = str(payload["label"])
        delta = float(payload["delta"])
        grid = np.asarray(payload["grid"], dtype=np.float64)
        p = np.asarray(payload["p"], dtype=np.float64)
        provenance = payload.get("provenance", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: not a valid distribution file: {exc}") from exc
    if version != DIST_FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported format_version {version}")
    table = ProbabilityTable(grid=grid, p=p, label=label)
    return LoadedDistribution(table=table, delta=delta, provenance=provenance, format_version=version)


def format_number(value) -> str:
    """Fixed CSV cell formatting: 17 significant digits, blanks for absent."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def write_csv(path, header, rows) -> None:
    """Write a report with '\\n' line endings regardless of platform."""
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_number(v) for v in row) + "\n")
