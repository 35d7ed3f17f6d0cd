"""Figure spec files.

A spec is a flat text file of ``key = value`` lines; blank lines and
lines starting with '#' are ignored.  Keys:

    kind      what to draw (see render.KINDS)         required
    input     comma-separated CSV paths               required
    out       output image path                       required
    columns   comma-separated column names to plot    optional
    xscale    linear | log                            optional
    yscale    linear | log                            optional
    title     axes title                              optional

Relative paths in ``input`` and ``out`` are resolved against the
directory containing the spec file, so a spec can be committed next to
its data and rendered from anywhere.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

KINDS = ("spectrum", "populations", "raster", "purity", "g2tau",
         "rate-compare")
_SCALES = ("linear", "log")
_KEYS = ("kind", "input", "out", "columns", "xscale", "yscale", "title")


class SpecError(ValueError):
    """Raised on a malformed or incomplete figure spec."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    inputs: tuple
    out: str
    columns: tuple = ()
    xscale: str = "linear"
    yscale: str = "linear"
    title: str = ""

    def with_out(self, out: str) -> "FigureSpec":
        return replace(self, out=out)


def _split_list(value: str) -> tuple:
    return tuple(v.strip() for v in value.split(",") if v.strip())


def parse_spec(text: str, base_dir: str = ".") -> FigureSpec:
    seen: dict = {}
    for lineno, rawline in enumerate(text.splitlines(), start=1):
        line = rawline.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SpecError(f"line {lineno}: expected 'key = value', "
                            f"got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _KEYS:
            raise SpecError(f"line {lineno}: unknown key {key!r} "
                            f"(known: {', '.join(_KEYS)})")
        if key in seen:
            raise SpecError(f"line {lineno}: duplicate key {key!r}")
        seen[key] = value

    for req in ("kind", "input", "out"):
        if req not in seen:
            raise SpecError(f"missing required key {req!r}")
    kind = seen["kind"]
    if kind not in KINDS:
        raise SpecError(f"unknown kind {kind!r} (known: {', '.join(KINDS)})")
    for axis in ("xscale", "yscale"):
        if axis in seen and seen[axis] not in _SCALES:
            raise SpecError(f"{axis} must be one of {', '.join(_SCALES)}, "
                            f"got {seen[axis]!r}")

    inputs = _split_list(seen["input"])
    if not inputs:
        raise SpecError("input lists no files")
    inputs = tuple(os.path.join(base_dir, p) if not os.path.isabs(p) else p
                   for p in inputs)
    out = seen["out"]
    if not os.path.isabs(out):
        out = os.path.join(base_dir, out)

    return FigureSpec(
        kind=kind,
        inputs=inputs,
        out=out,
        columns=_split_list(seen.get("columns", "")),
        xscale=seen.get("xscale", "linear"),
        yscale=seen.get("yscale", "linear"),
        title=seen.get("title", ""),
    )


def load_spec(path: str) -> FigureSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError(f"cannot read spec {path}: {exc}") from exc
    try:
        return parse_spec(text, base_dir=os.path.dirname(os.path.abspath(path)))
    except SpecError as exc:
        raise SpecError(f"{path}: {exc}") from None
