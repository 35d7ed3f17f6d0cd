"""Self-describing CSV artifacts.

Every output file carries a '#'-prefixed header block with the tool version,
the full model parameters, the seed, and any convergence settings, so a file
alone suffices to re-run its experiment.  The timestamp line is the only
nondeterministic content; determinism checks must ignore lines starting with
'# timestamp'.  Encoding UTF-8, '.' decimal separator, no locale dependence.
"""

from __future__ import annotations

import csv
import datetime
import io

import numpy as np

from . import __version__
from .params import SystemParams

FLOAT_FMT = "%.12g"


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FMT % value
    return str(value)


def write_csv(path, columns: dict, params: SystemParams = None, seed=None,
              meta: dict = None, timestamp: bool = True) -> None:
    """Write named columns with a metadata header block.

    columns maps name -> sequence; all sequences must share one length.
    """
    names = list(columns)
    if not names:
        raise ValueError("no columns to write")
    lengths = {len(columns[n]) for n in names}
    if len(lengths) != 1:
        raise ValueError(f"column lengths differ: { {n: len(columns[n]) for n in names} }")

    buf = io.StringIO()
    buf.write(f"# bundlesim {__version__}\n")
    if timestamp:
        now = datetime.datetime.now(datetime.timezone.utc).isoformat()
        buf.write(f"# timestamp = {now}\n")
    if seed is not None:
        buf.write(f"# seed = {seed}\n")
    if params is not None:
        for key, value in params.as_dict().items():
            buf.write(f"# param {key} = {_fmt(value)}\n")
    for key, value in (meta or {}).items():
        buf.write(f"# {key} = {_fmt(value)}\n")

    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    for row in zip(*(columns[n] for n in names)):
        writer.writerow([_fmt(v) for v in row])

    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def read_csv(path):
    """Read back a file written by write_csv.

    Returns (meta, columns): meta is the header block as {key: string value}
    (params keys prefixed 'param '), columns maps name -> numpy array of
    floats where every entry parses as a number, else a list of strings.
    """
    meta = {}
    rows = []
    header = None
    with open(path, encoding="utf-8", newline="") as fh:
        for line in fh:
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    meta[key.strip()] = value.strip()
                else:
                    meta.setdefault("banner", body)
                continue
            if line.strip() == "":
                continue
            parsed = next(csv.reader([line]))
            if header is None:
                header = parsed
            else:
                rows.append(parsed)
    if header is None:
        raise ValueError(f"{path}: no data header found")

    columns = {}
    for i, name in enumerate(header):
        raw = [row[i] for row in rows]
        try:
            columns[name] = np.asarray([float(v) for v in raw])
        except ValueError:
            columns[name] = raw
    return meta, columns
