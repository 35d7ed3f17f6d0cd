"""Deterministic figure rendering.

Each kind knows which columns it needs and errors out, naming them,
before any image file is created.  The matplotlib style is pinned here
so renders are reproducible; the test suite compares against committed
reference images.
"""

from __future__ import annotations

import math
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csvread import Artifact, ArtifactError, read_artifact
from .spec import FigureSpec

STYLE = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 110,
    "savefig.dpi": 110,
    "font.size": 11,
    "font.family": "DejaVu Sans",
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.6,
    "legend.framealpha": 0.9,
    "svg.hashsalt": "bundlefigs",
}

_CAVITY_COLOR = "tab:blue"
_QUBIT_COLOR = "tab:red"


class RenderError(Exception):
    """Raised when a figure cannot be drawn from the given inputs."""


def _pretty_angle(text: str) -> str:
    """Render a header angle value as a pi fraction when it is one."""
    try:
        v = float(text)
    except ValueError:
        return text
    for den in (1, 2, 3, 4, 6):
        if abs(v - math.pi / den) < 1e-6:
            return "pi" if den == 1 else f"pi/{den}"
    return f"{v:g}"


def _param_label(art: Artifact, key: str) -> str:
    value = art.params.get(key, "?")
    if key == "theta":
        return f"theta = {_pretty_angle(value)}"
    try:
        return f"{key} = {float(value):g}"
    except ValueError:
        return f"{key} = {value}"


def _draw_spectrum(ax, spec: FigureSpec, arts: list) -> None:
    columns = spec.columns or ("xdx",)
    for art in arts:
        art.require("dq", *columns)
    multi_file = len(arts) > 1
    for art in arts:
        for name in columns:
            label = _param_label(art, "theta") if multi_file else name
            ax.plot(art.columns["dq"], art.columns[name], label=label)
    ax.set_xlabel("qubit detuning")
    if tuple(columns) == ("xdx",):
        ax.set_ylabel(r"$\langle X^\dagger X\rangle$")
    else:
        ax.set_ylabel("zero-delay correlation")
    ax.legend()


def _draw_populations(ax, spec: FigureSpec, arts: list) -> None:
    columns = spec.columns or ("P_1e", "P_2e", "P_3e")
    for art in arts:
        art.require("t", *columns)
        for name in columns:
            ax.plot(art.columns["t"], art.columns[name],
                    label=name.replace("P_", "|") + ">")
    ax.set_xlabel("time")
    ax.set_ylabel("population")
    ax.legend()


def _draw_raster(ax, spec: FigureSpec, arts: list) -> None:
    for art in arts:
        art.require("trajectory_id", "time", "channel")
    styles = {"cavity": dict(marker="|", s=90, color=_CAVITY_COLOR),
              "qubit": dict(marker="x", s=36, color=_QUBIT_COLOR)}
    for art in arts:
        tid = art.columns["trajectory_id"]
        t = art.columns["time"]
        chan = art.columns["channel"]
        if isinstance(chan, np.ndarray):
            raise RenderError(
                f"{art.path}: channel column is numeric, expected labels")
        for name, kw in styles.items():
            mask = np.array([c == name for c in chan])
            if mask.any():
                ax.scatter(t[mask], tid[mask], label=name, **kw)
    ax.set_xlabel("time")
    ax.set_ylabel("trajectory")
    if ax.get_legend_handles_labels()[0]:
        ax.legend(loc="upper right")


def _draw_purity(ax, spec: FigureSpec, arts: list) -> None:
    for art in arts:
        art.require("pi2", "stderr")
        variable = next(iter(art.columns))
        if variable in ("pi2", "stderr"):
            raise RenderError(
                f"{art.path}: first column should be the sweep variable")
        ax.errorbar(art.columns[variable], art.columns["pi2"],
                    yerr=art.columns["stderr"], fmt="o-", capsize=3)
        ax.set_xlabel(variable)
    ax.set_ylabel("two-photon purity")


def _draw_g2tau(ax, spec: FigureSpec, arts: list) -> None:
    for art in arts:
        art.require("tau", "g")
        ax.plot(art.columns["tau"], art.columns["g"], marker=".",
                label=_param_label(art, "gamma_q"))
    ax.axhline(1.0, linestyle="--", color="0.4", linewidth=1.0)
    s = arts[0].meta.get("s", "2")
    ax.set_xlabel("delay")
    ax.set_ylabel(rf"$g^{{({s})}}(\tau)$")
    ax.legend()


def _draw_rate_compare(ax, spec: FigureSpec, arts: list) -> None:
    for art in arts:
        art.require("theta", "omega_analytic", "omega_numeric")
        th = art.columns["theta"]
        ax.plot(th, art.columns["omega_analytic"], label="closed form")
        ax.plot(th, art.columns["omega_numeric"], "o", label="measured")
    ax.set_xlabel("mixing angle")
    ax.set_ylabel("effective two-photon rate")
    ax.legend()


_DRAWERS = {
    "spectrum": _draw_spectrum,
    "populations": _draw_populations,
    "raster": _draw_raster,
    "purity": _draw_purity,
    "g2tau": _draw_g2tau,
    "rate-compare": _draw_rate_compare,
}


def render(spec: FigureSpec) -> str:
    """Draw the figure a spec describes and write it to spec.out.

    All inputs are read and validated first; on any error no image
    file is produced.  Returns the output path.
    """
    arts = [read_artifact(p) for p in spec.inputs]
    for art in arts:
        if art.n_rows == 0:
            raise RenderError(f"{art.path}: no data rows")
    draw = _DRAWERS[spec.kind]

    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        try:
            draw(ax, spec, arts)
            ax.set_xscale(spec.xscale)
            ax.set_yscale(spec.yscale)
            if spec.title:
                ax.set_title(spec.title)
            fig.tight_layout()
            out_dir = os.path.dirname(spec.out)
            if out_dir:
                os.makedirs(out_dir, exist_ok=True)
            fig.savefig(spec.out, metadata={"Software": None})
        finally:
            plt.close(fig)
    return spec.out
