"""The standard figure set.

Each entry names a figure kind, the CSV files it consumes (as bare
file names inside a data directory supplied by the caller), and the
axis choices.  gallery_spec() turns an entry into a concrete
FigureSpec; the test suite and the golden-image generator both build
their specs from here so they can never drift apart.
"""

from __future__ import annotations

import os

from .spec import FigureSpec

GALLERY = {
    "spectrum_overlay": dict(
        kind="spectrum",
        inputs=("spectrum_even.csv", "spectrum_tilted.csv"),
        columns=("xdx",),
        yscale="log",
        title="steady-state excitation vs qubit detuning",
    ),
    "populations": dict(
        kind="populations",
        inputs=("rabi_even.csv",),
        columns=("P_1e", "P_2e", "P_3e"),
        title="closed-system populations at the two-photon resonance",
    ),
    "correlation_dips": dict(
        kind="spectrum",
        inputs=("spectrum_dips.csv",),
        columns=("g2", "g3", "g4"),
        yscale="log",
        title="zero-delay correlations near the two-photon resonance",
    ),
    "click_raster": dict(
        kind="raster",
        inputs=("raster.csv",),
        title="emission clicks by trajectory",
    ),
    "purity_vs_kappa": dict(
        kind="purity",
        inputs=("purity.csv",),
        xscale="log",
        title="two-photon purity vs cavity decay",
    ),
    "bundle_crossover": dict(
        kind="g2tau",
        inputs=("g2tau_small.csv", "g2tau_mid.csv", "g2tau_large.csv"),
        xscale="log",
        title="delayed bundle correlation across qubit decay rates",
    ),
}


def gallery_spec(name: str, data_dir: str, out: str) -> FigureSpec:
    entry = GALLERY[name]
    return FigureSpec(
        kind=entry["kind"],
        inputs=tuple(os.path.join(data_dir, f) for f in entry["inputs"]),
        out=out,
        columns=tuple(entry.get("columns", ())),
        xscale=entry.get("xscale", "linear"),
        yscale=entry.get("yscale", "linear"),
        title=entry.get("title", ""),
    )
