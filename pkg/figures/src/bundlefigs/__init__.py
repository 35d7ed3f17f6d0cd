"""Figure rendering for bundle-emission CSV artifacts.

The simulator writes its results as CSV files with a commented header
(parameters and run metadata) followed by named columns.  This package
turns those files into figures.  It never recomputes physics: every
curve is drawn from columns exactly as the CSV provides them.

A figure is described by a small flat spec file (key = value lines)
naming the kind of plot, the input CSVs, and the output image.  The
renderer pins the matplotlib style so the same spec and data always
produce the same image, which lets the test suite compare against
committed reference renders.
"""

from .csvread import Artifact, ArtifactError, read_artifact
from .spec import FigureSpec, SpecError, parse_spec, load_spec
from .render import RenderError, render
from .gallery import GALLERY, gallery_spec

__version__ = "0.1.0"

__all__ = [
    "Artifact",
    "ArtifactError",
    "read_artifact",
    "FigureSpec",
    "SpecError",
    "parse_spec",
    "load_spec",
    "RenderError",
    "render",
    "GALLERY",
    "gallery_spec",
    "__version__",
]
