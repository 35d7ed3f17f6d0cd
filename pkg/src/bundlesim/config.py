"""Flat key = value run configuration, fail-closed.

One assignment per line, '#' comments, no nesting: every setting in this
problem is a scalar or a 1-D grid.  Arrays are comma lists ("0.5,0.6,0.7")
or linspace ranges ("0.5:4.5:81" meaning 81 points inclusive).  Angles
accept multiples of pi ("pi/2", "0.5*pi").  Unknown keys are rejected so a
typo cannot silently fall back to a default.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .params import SystemParams

EXPERIMENT_KINDS = ("spectrum", "rabi", "trajectories", "purity-sweep",
                    "g2tau", "omega-eff")

_PI_FORM = re.compile(
    r"\s*(?:(?P<a>\d+(?:\.\d*)?)\s*\*\s*)?pi(?:\s*/\s*(?P<b>\d+(?:\.\d*)?))?\s*$")


class ConfigError(ValueError):
    """Configuration text failed parsing or validation."""


def _parse_float(key, raw):
    try:
        return float(raw)
    except ValueError:
        pass
    m = _PI_FORM.match(raw)
    if m:
        a = float(m.group("a")) if m.group("a") else 1.0
        b = float(m.group("b")) if m.group("b") else 1.0
        return a * np.pi / b
    raise ConfigError(f"key {key!r}: cannot parse number from {raw!r}")


def _parse_int(key, raw):
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"key {key!r}: cannot parse integer from {raw!r}")


def _parse_bool(key, raw):
    low = raw.strip().lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"key {key!r}: cannot parse boolean from {raw!r}")


def _parse_array(key, raw):
    raw = raw.strip()
    if not raw:
        raise ConfigError(f"key {key!r}: empty grid")
    if "," in raw:
        vals = [_parse_float(key, tok) for tok in raw.split(",") if tok.strip()]
        if not vals:
            raise ConfigError(f"key {key!r}: empty grid")
        return np.asarray(vals, dtype=float)
    if ":" in raw:
        parts = raw.split(":")
        if len(parts) != 3:
            raise ConfigError(f"key {key!r}: range needs lo:hi:count, got {raw!r}")
        lo, hi = _parse_float(key, parts[0]), _parse_float(key, parts[1])
        count = _parse_int(key, parts[2])
        if count < 1:
            raise ConfigError(f"key {key!r}: range count must be >= 1")
        return np.linspace(lo, hi, count)
    return np.asarray([_parse_float(key, raw)], dtype=float)


def _parse_str(key, raw):
    return raw.strip()


_MODEL_KEYS = {
    "omega_r": _parse_float, "omega_q": _parse_float, "lambda_c": _parse_float,
    "theta": _parse_float, "Omega_d": _parse_float, "omega_L": _parse_float,
    "kappa": _parse_float, "gamma_q": _parse_float, "n_max": _parse_int,
}

_RUN_KEYS = {
    "kind": _parse_str, "seed": _parse_int, "n_traj": _parse_int,
    "t_end": _parse_float, "dt_out": _parse_float, "threads": _parse_int,
    "dq_grid": _parse_array, "tau_grid": _parse_array,
    "sweep_grid": _parse_array, "theta_grid": _parse_array,
    "tau_bins": _parse_array, "sweep_variable": _parse_str,
    "s": _parse_int, "j": _parse_int, "auto_resonance": _parse_bool,
    "m_levels": _parse_int, "n_phase": _parse_int,
    "keep_fraction": _parse_float, "t_window": _parse_float,
    "rtol": _parse_float,
}


@dataclass(frozen=True)
class RunConfig:
    """Validated experiment description: model constants plus run controls."""

    params: SystemParams
    kind: str = None
    seed: int = 1
    n_traj: int = None
    t_end: float = None
    dt_out: float = None
    threads: int = 1
    dq_grid: np.ndarray = None
    tau_grid: np.ndarray = None
    sweep_grid: np.ndarray = None
    theta_grid: np.ndarray = None
    tau_bins: np.ndarray = None
    sweep_variable: str = None
    s: int = 2
    j: int = 2
    auto_resonance: bool = True
    m_levels: int = None
    n_phase: int = None
    keep_fraction: float = 0.8
    t_window: float = None
    rtol: float = None

    def replace(self, **changes) -> "RunConfig":
        return replace(self, **changes)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a flat key = value document (fail-closed)."""
    model_vals, run_vals = {}, {}
    seen = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, raw = stripped.partition("=")
        key, raw = key.strip(), raw.strip()
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        seen.add(key)
        if key in _MODEL_KEYS:
            model_vals[key] = _MODEL_KEYS[key](key, raw)
        elif key in _RUN_KEYS:
            run_vals[key] = _RUN_KEYS[key](key, raw)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")

    try:
        params = SystemParams(**model_vals)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    kind = run_vals.get("kind")
    if kind is not None and kind not in EXPERIMENT_KINDS:
        raise ConfigError(
            f"key 'kind': {kind!r} is not one of {', '.join(EXPERIMENT_KINDS)}")
    if "sweep_variable" in run_vals and run_vals["sweep_variable"] not in (
            "kappa", "theta"):
        raise ConfigError("key 'sweep_variable': must be 'kappa' or 'theta'")

    cfg_fields = {f.name for f in fields(RunConfig)}
    return RunConfig(params=params,
                     **{k: v for k, v in run_vals.items() if k in cfg_fields})
