"""Command line front end: render figures from spec files."""

from __future__ import annotations

import argparse
import sys

from .csvread import ArtifactError
from .render import RenderError, render
from .spec import SpecError, load_spec


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bundlefigs",
        description="Render figures from simulator CSV artifacts.")
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render one figure")
    p_render.add_argument("--spec", required=True,
                          help="path to a figure spec file")
    args = parser.parse_args(argv)

    try:
        spec = load_spec(args.spec)
    except SpecError as exc:
        print(f"bundlefigs: {exc}", file=sys.stderr)
        return 2
    try:
        out = render(spec)
    except (ArtifactError, RenderError, OSError) as exc:
        print(f"bundlefigs: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
