"""Deterministic file output: CSV tables, JSON reports, run records.

Floats are written with 17 significant digits (value-preserving for float64)
and a fixed column order, so identical inputs reproduce identical bytes on
one platform. The run record carries everything needed to reproduce an
invocation and is written as a JSON sidecar next to the data files.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


def write_json(path, payload) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    return path


@dataclass
class RunRecord:
    command: str
    params: dict
    seed: int
    version: str
    wall_time_s: float = 0.0
    outputs: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "version": self.version,
            "wall_time_s": self.wall_time_s,
            "outputs": [str(p) for p in self.outputs],
        }


class RecordedRun:
    """Times a command and writes the sidecar record on exit."""

    def __init__(self, command: str, params: dict, seed: int, version: str, out_dir):
        self.record = RunRecord(command=command, params=params, seed=seed, version=version)
        self.out_dir = Path(out_dir)
        self._start = None

    def __enter__(self):
        self._start = time.perf_counter()
        return self

    def add(self, path) -> Path:
        self.record.outputs.append(str(path))
        return Path(path)

    def __exit__(self, exc_type, exc, tb):
        self.record.wall_time_s = time.perf_counter() - self._start
        if exc_type is None:
            name = self.record.command.replace("-", "_") + "_run.json"
            write_json(self.out_dir / name, self.record.to_dict())
        return False
