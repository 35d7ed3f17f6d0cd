"""Command-line front end: one subcommand per experiment kind, CSV out.

    bundlesim <kind> --config run.cfg --out result.csv [--seed N] [--threads N]

Kinds: spectrum, rabi, trajectories, purity-sweep, g2tau, omega-eff.  The
config file format is described in config.py; --seed and --threads override
the config.  Exit code 0 on success, 2 on configuration errors, 1 on runtime
failures.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import EXPERIMENT_KINDS, ConfigError, RunConfig, parse_config
from .correlations import excitation_spectrum, g2_bundle_tau, g2_photon_tau
from .csvio import write_csv
from .evolution import schrodinger_evolve
from .operators import basis_labels
from .rates import find_resonance, omega_eff_analytic, omega_eff_numeric
from .trajectories import (TrajectoryEngine, classify_bundles,
                           merge_bundle_stats, purity_sweep, run_ensemble)


def _require(cfg: RunConfig, attr: str, kind: str):
    value = getattr(cfg, attr)
    if value is None or (isinstance(value, np.ndarray) and value.size == 0):
        raise ConfigError(f"kind {kind!r} requires key {attr!r}")
    return value


def _resolved_drive(cfg: RunConfig):
    p = cfg.params
    if cfg.auto_resonance:
        return p.with_(omega_L=find_resonance(p, cfg.j))
    return p


def _run_spectrum(cfg: RunConfig, out: str) -> None:
    grid = _require(cfg, "dq_grid", "spectrum")
    res = excitation_spectrum(
        cfg.params, grid, m_levels=cfg.m_levels or 20,
        n_phase=cfg.n_phase or 16, keep_fraction=cfg.keep_fraction,
        rtol=cfg.rtol or 1e-10, threads=cfg.threads)
    write_csv(out,
              {"dq": res.detuning, "xdx": res.values["xdx"],
               "g2": res.values["g2"], "g3": res.values["g3"],
               "g4": res.values["g4"], "flag": res.flags},
              params=cfg.params, seed=cfg.seed,
              meta={k: v for k, v in res.metadata.items() if k != "params"})


def _run_rabi(cfg: RunConfig, out: str) -> None:
    p = _resolved_drive(cfg)
    t_end = cfg.t_end if cfg.t_end is not None else \
        1.5 * np.pi / omega_eff_analytic(p)
    dt_out = cfg.dt_out if cfg.dt_out is not None else t_end / 2000.0
    res = schrodinger_evolve(p, None, t_end, dt_out)
    cols = {"t": res.times}
    for i, label in enumerate(basis_labels(p.n_max)):
        cols[f"P_{label}"] = res.populations[:, i]
    write_csv(out, cols, params=p, seed=cfg.seed,
              meta={"omega_l_star": p.omega_L, "norm_drift": res.norm_drift,
                    "method": res.metadata["method"]})


def _run_trajectories(cfg: RunConfig, out: str) -> None:
    p = _resolved_drive(cfg)
    n_traj = cfg.n_traj or 25
    t_end = cfg.t_end if cfg.t_end is not None else 1e5
    engine = TrajectoryEngine(p, keep_fraction=cfg.keep_fraction)
    results = run_ensemble(engine, cfg.seed, n_traj, t_end,
                           threads=cfg.threads)
    window = cfg.t_window if cfg.t_window is not None else 10.0 / p.kappa
    merged = merge_bundle_stats(
        [classify_bundles(r.clicks, window, r.metadata["t_end"])
         for r in results])
    ids, times, channels = [], [], []
    for i, r in enumerate(results):
        for click in r.clicks:
            ids.append(i)
            times.append(click.time)
            channels.append(click.channel)
    meta = {"omega_l_star": p.omega_L, "n_traj": n_traj, "t_end": t_end,
            "t_window": window, "p_tot": merged.p_tot,
            "n_qubit_clicks": merged.n_qubit_clicks}
    if merged.p_tot:
        meta["pi_2"] = merged.purity(2)
        meta["pi_2_stderr"] = merged.purity_stderr(2)
    write_csv(out, {"trajectory_id": ids, "time": times, "channel": channels},
              params=p, seed=cfg.seed, meta=meta)


def _run_purity_sweep(cfg: RunConfig, out: str) -> None:
    variable = _require(cfg, "sweep_variable", "purity-sweep")
    grid = _require(cfg, "sweep_grid", "purity-sweep")
    n_traj = _require(cfg, "n_traj", "purity-sweep")
    t_end = _require(cfg, "t_end", "purity-sweep")
    res = purity_sweep(cfg.params, variable, grid, n_traj, t_end,
                       seed=cfg.seed, j=cfg.j, t_window=cfg.t_window,
                       relocate=cfg.auto_resonance,
                       keep_fraction=cfg.keep_fraction, threads=cfg.threads)
    write_csv(out,
              {variable: res.grid, "pi2": res.pi2, "stderr": res.stderr,
               "n_events": res.n_events, "omega_l_star": res.omega_l,
               "flag": res.flags},
              params=cfg.params, seed=cfg.seed,
              meta={k: v for k, v in res.metadata.items() if k != "params"})


def _run_g2tau(cfg: RunConfig, out: str) -> None:
    taus = _require(cfg, "tau_grid", "g2tau")
    p = _resolved_drive(cfg)
    fn = {1: g2_photon_tau, 2: g2_bundle_tau}.get(cfg.s)
    if fn is None:
        raise ConfigError(f"key 's': order {cfg.s} not supported (1 or 2)")
    curve = fn(p, taus, n_phase=cfg.n_phase or 8, m_levels=cfg.m_levels or 16,
               keep_fraction=cfg.keep_fraction, rtol=cfg.rtol or 1e-10)
    write_csv(out,
              {"tau_requested": taus, "tau": curve.tau, "g": curve.g,
               "flag": curve.flags},
              params=p, seed=cfg.seed,
              meta={k: v for k, v in curve.metadata.items()
                    if k not in ("params", "tau_requested")})


def _run_omega_eff(cfg: RunConfig, out: str) -> None:
    thetas = _require(cfg, "theta_grid", "omega-eff")

    def one(theta):
        pt = cfg.params.with_(theta=float(theta))
        analytic = omega_eff_analytic(pt)
        fit = omega_eff_numeric(pt)
        return analytic, fit

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(one, thetas))
    else:
        results = [one(th) for th in thetas]
    write_csv(out,
              {"theta": thetas,
               "omega_analytic": [a for a, _ in results],
               "omega_numeric": [f.omega_num for _, f in results],
               "fit_quality": [f.fit_quality for _, f in results],
               "omega_l_star": [f.omega_l_star for _, f in results]},
              params=cfg.params, seed=cfg.seed,
              meta={"rate_convention": "half the angular frequency of the "
                                       "P_{j,e} oscillation"})


_RUNNERS = {
    "spectrum": _run_spectrum,
    "rabi": _run_rabi,
    "trajectories": _run_trajectories,
    "purity-sweep": _run_purity_sweep,
    "g2tau": _run_g2tau,
    "omega-eff": _run_omega_eff,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bundlesim",
        description="Multiphoton bundle emission simulator: dressed-state "
                    "master equation, quantum-jump trajectories, photon "
                    "correlations.")
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in EXPERIMENT_KINDS:
        sp = sub.add_parser(kind, help=f"run a {kind} experiment")
        sp.add_argument("--config", required=True,
                        help="flat key = value configuration file")
        sp.add_argument("--out", required=True, help="output CSV path")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the config seed")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker threads for sweep points")
    return parser


def run_experiment(cfg: RunConfig, out: str) -> None:
    """Dispatch a validated config to its experiment runner."""
    if cfg.kind not in _RUNNERS:
        raise ConfigError(f"unknown experiment kind {cfg.kind!r}")
    _RUNNERS[cfg.kind](cfg, out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = parse_config(fh.read())
        if cfg.kind is not None and cfg.kind != args.command:
            raise ConfigError(
                f"config kind {cfg.kind!r} conflicts with subcommand "
                f"{args.command!r}")
        cfg = cfg.replace(kind=args.command)
        if args.seed is not None:
            cfg = cfg.replace(seed=args.seed)
        if args.threads is not None:
            cfg = cfg.replace(threads=args.threads)
    except (OSError, ConfigError) as exc:
        print(f"bundlesim: configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        run_experiment(cfg, args.out)
    except ConfigError as exc:
        print(f"bundlesim: configuration error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"bundlesim: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
