"""Reader for the simulator's CSV artifact format.

Artifacts start with '#'-prefixed header lines: a banner naming the
producer and its version, then ``key = value`` entries.  Keys of the
form ``param <name>`` carry the physical parameters the run used; all
other keys are run metadata.  The first uncommented line is the column
header, the rest are data rows.

This module parses that layout on its own so the figures package has no
import-time dependency on the simulator.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np


class ArtifactError(Exception):
    """Raised when a CSV artifact is missing or malformed."""


@dataclass
class Artifact:
    """One parsed CSV artifact.

    columns maps a column name to a float ndarray when every entry in
    the column parses as a float, and to a list of strings otherwise
    (channel labels, flags).  params and meta hold the header entries
    as strings, exactly as written.
    """

    path: str
    banner: str
    params: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    columns: dict = field(default_factory=dict)

    @property
    def n_rows(self) -> int:
        for col in self.columns.values():
            return len(col)
        return 0

    def require(self, *names: str) -> None:
        """Raise ArtifactError naming any columns the file lacks."""
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise ArtifactError(
                f"{self.path}: missing column(s) {', '.join(missing)}; "
                f"file has {', '.join(self.columns) or 'none'}")


def _parse_header_line(line: str, params: dict, meta: dict) -> str | None:
    body = line[1:].strip()
    if "=" not in body:
        return body  # banner line
    key, _, value = body.partition("=")
    key, value = key.strip(), value.strip()
    if key.startswith("param "):
        params[key[len("param "):].strip()] = value
    else:
        meta[key] = value
    return None


def parse_artifact(text: str, path: str = "<string>") -> Artifact:
    params: dict = {}
    meta: dict = {}
    banner = ""
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        got = _parse_header_line(lines[i], params, meta)
        if got is not None:
            banner = got
        i += 1
    if i >= len(lines) or not lines[i].strip():
        raise ArtifactError(f"{path}: no column header row found")
    reader = csv.reader(io.StringIO("\n".join(lines[i:])))
    header = next(reader)
    raw: list[list[str]] = [[] for _ in header]
    for row in reader:
        if not row:
            continue
        if len(row) != len(header):
            raise ArtifactError(
                f"{path}: row with {len(row)} fields, expected {len(header)}")
        for cell, bucket in zip(row, raw):
            bucket.append(cell)
    columns: dict = {}
    for name, cells in zip(header, raw):
        try:
            columns[name] = np.array([float(c) for c in cells])
        except ValueError:
            columns[name] = cells
    return Artifact(path=path, banner=banner, params=params, meta=meta,
                    columns=columns)


def read_artifact(path: str) -> Artifact:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ArtifactError(f"cannot read {path}: {exc}") from exc
    return parse_artifact(text, path=str(path))
