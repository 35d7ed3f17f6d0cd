"""Quantum-jump Monte Carlo unraveling with click records and bundle
statistics.

A trajectory evolves |psi> under the non-Hermitian effective Hamiltonian

    H_eff(t) = H(t) - (i/2)(kappa X^dag X + gamma_q D^dag D)

without renormalizing; when the squared norm falls to a pre-drawn uniform
threshold a jump fires: channel X with probability kappa<X^dag X> /
(kappa<X^dag X> + gamma_q<D^dag D>), else D, then renormalize, log the click,
redraw the threshold.  Because the no-click norm never increases, whole drive
periods can be skipped with cached propagator powers (doubling strides, up
to 2^25 periods) and the crossing located only inside the single period
where it occurs, by dense integration plus root bracketing.  That makes the
very long waiting times between bundles (~1/Omega_eff, tens of thousands of
periods) essentially free.

Cavity clicks cluster into bundles: consecutive gaps below the window T_w
(default 10/kappa) join a cluster.  Qubit-channel clicks, the spectrally
distinct reset photons near omega_q, are logged and attributed to clusters
for diagnostics but never change a cluster's size.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .correlations import CorrelationCurve
from .dressed import DressedBasis, JumpOperators, jump_operators
from .engine import DrivePropagators
from .operators import basis_labels, build_qubit_ops, build_rabi_hamiltonian
from .params import SystemParams
from .rates import find_resonance

CAVITY, QUBIT = "cavity", "qubit"


class ClickRecord(NamedTuple):
    time: float
    channel: str


@dataclass
class TrajectoryResult:
    """Clicks and sampled populations of one stochastic realization."""

    clicks: list
    times: np.ndarray
    populations: np.ndarray      # normalized |<n,l|psi>|^2 at sample times
    sample_norms: np.ndarray     # unnormalized squared norm at sample times
    labels: list
    seed: object
    final_state: np.ndarray
    metadata: dict = field(default_factory=dict)


class TrajectoryEngine:
    """Reusable propagator cache for an ensemble at fixed parameters."""

    def __init__(self, p: SystemParams, basis: DressedBasis = None,
                 jumps: JumpOperators = None, keep_fraction: float = 0.8,
                 n_nodes: int = 64, n_strides: int = 26):
        if basis is None or jumps is None:
            basis, jumps = jump_operators(p, keep_fraction=keep_fraction)
        self.p = p
        self.jumps = jumps
        self.psi0 = basis.ground_state().astype(complex)
        h_r = build_rabi_hamiltonian(p)
        decay = (p.kappa * (jumps.X.conj().T @ jumps.X)
                 + p.gamma_q * (jumps.D.conj().T @ jumps.D))
        _, sigma_x, _ = build_qubit_ops(p.n_max)
        self.props = DrivePropagators(h_r - 0.5j * decay, sigma_x,
                                      p.Omega_d, p.omega_L,
                                      n_nodes=n_nodes, n_strides=n_strides)
        self.period = self.props.period

    def _locate_and_jump(self, psi, t_from, threshold, period_index, rng,
                         clicks):
        """Handle the remainder of one period after a detected crossing.

        Returns (state at period end, current threshold).  May fire several
        jumps if thresholds are crossed repeatedly within the same period.
        """
        t = t_from
        while True:
            if self.period - t < 1e-12:
                return psi, threshold
            sol = self.props.segment(psi, t, self.period, period_index)

            def norm2(tl):
                v = sol.sol(tl).view(complex)
                return np.real(v.conj() @ v)

            if norm2(self.period) > threshold:
                return sol.y[:, -1].copy().view(complex), threshold
            t_star = brentq(lambda tl: norm2(tl) - threshold, t, self.period,
                            xtol=1e-12, rtol=8.9e-16)
            state = sol.sol(t_star).view(complex).copy()
            weight_x = self.p.kappa * np.real(np.vdot(
                self.jumps.X @ state, self.jumps.X @ state))
            weight_d = self.p.gamma_q * np.real(np.vdot(
                self.jumps.D @ state, self.jumps.D @ state))
            total = weight_x + weight_d
            if total > 0.0:
                if rng.random() < weight_x / total:
                    state = self.jumps.X @ state
                    channel = CAVITY
                else:
                    state = self.jumps.D @ state
                    channel = QUBIT
                state /= np.linalg.norm(state)
                clicks.append(ClickRecord(period_index * self.period + t_star,
                                          channel))
            else:
                # decay-free system grazing the threshold numerically
                state /= np.linalg.norm(state)
            threshold = _draw_threshold(rng)
            psi, t = state, t_star

    def run(self, seed, t_end: float, dt_out: float = 0.0,
            psi0: np.ndarray = None) -> TrajectoryResult:
        """One trajectory up to the last whole drive period before t_end.

        dt_out > 0 samples normalized populations every round(dt_out/T)
        periods (sampling is snapped to period boundaries); 0 disables
        sampling.  psi0 defaults to the dressed ground state.
        """
        seq = seed if isinstance(seed, np.random.SeedSequence) \
            else np.random.SeedSequence(entropy=seed)
        rng = np.random.default_rng(seq)
        period = self.period
        m_end = int(np.floor(t_end / period))
        sample_stride = max(1, int(round(dt_out / period))) if dt_out > 0 else 0

        clicks = []
        sample_ms, sample_pops, sample_norms = [], [], []
        psi = (self.psi0 if psi0 is None else np.asarray(psi0, dtype=complex)).copy()
        threshold = _draw_threshold(rng)
        m = 0
        next_sample = 0

        def take_sample(m_now, state):
            n2 = float(np.real(state.conj() @ state))
            sample_ms.append(m_now)
            sample_pops.append(np.abs(state) ** 2 / n2)
            sample_norms.append(n2)

        while m < m_end:
            if sample_stride and m == next_sample:
                take_sample(m, psi)
                next_sample += sample_stride
            m_cap = min(m_end, next_sample) if sample_stride else m_end
            advanced = False
            for j in reversed(range(len(self.props.strides))):
                if m + (1 << j) > m_cap:
                    continue
                candidate = self.props.strides[j] @ psi
                if np.real(candidate.conj() @ candidate) > threshold:
                    psi = candidate
                    m += 1 << j
                    advanced = True
                    break
            if advanced or m >= m_cap:
                continue
            # threshold falls inside period m: locate the click(s) densely
            psi, threshold = self._locate_and_jump(psi, 0.0, threshold, m,
                                                   rng, clicks)
            m += 1
        if sample_stride and m == next_sample:
            take_sample(m, psi)

        return TrajectoryResult(
            clicks=clicks,
            times=np.asarray(sample_ms, dtype=float) * period,
            populations=(np.asarray(sample_pops) if sample_pops
                         else np.empty((0, self.props.dim))),
            sample_norms=np.asarray(sample_norms, dtype=float),
            labels=basis_labels(self.p.n_max),
            seed=seq.entropy, final_state=psi,
            metadata={"t_end": m_end * period, "params": self.p.as_dict()})


def _draw_threshold(rng) -> float:
    r = rng.random()
    while r == 0.0:
        r = rng.random()
    return r


def mcwf_run(p: SystemParams, jumps: JumpOperators = None, seed=0,
             t_end: float = 1000.0, dt_out: float = 0.0,
             keep_fraction: float = 0.8) -> TrajectoryResult:
    """Single quantum-jump trajectory (builds its own propagator cache)."""
    if jumps is not None:
        basis, _ = jump_operators(p, keep_fraction=keep_fraction)
        engine = TrajectoryEngine(p, basis=basis, jumps=jumps)
    else:
        engine = TrajectoryEngine(p, keep_fraction=keep_fraction)
    return engine.run(seed, t_end, dt_out)


def run_ensemble(engine: TrajectoryEngine, master_seed, n_traj: int,
                 t_end: float, dt_out: float = 0.0,
                 threads: int = 1) -> list:
    """n_traj independent trajectories with deterministically derived seeds.

    Seeds are spawned from the master seed by trajectory index, so the
    ensemble is reproducible and independent of execution order.
    """
    seqs = np.random.SeedSequence(entropy=master_seed).spawn(n_traj)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(
                lambda sq: engine.run(sq, t_end, dt_out), seqs))
    return [engine.run(sq, t_end, dt_out) for sq in seqs]


@dataclass
class BundleStats:
    """Cluster-size statistics of the cavity clicks."""

    histogram: dict                 # cluster size -> event count
    clusters: list                  # (t_first, t_last, size, n_qubit_inside)
    n_qubit_clicks: int
    duration: float = 0.0           # total observed time behind the counts

    @property
    def p_tot(self) -> int:
        return sum(self.histogram.values())

    def count(self, n: int) -> int:
        return self.histogram.get(n, 0)

    def purity(self, n: int):
        """Fraction of emission events of size exactly n; None if no events."""
        total = self.p_tot
        return self.count(n) / total if total else None

    def purity_stderr(self, n: int):
        total = self.p_tot
        if not total:
            return None
        frac = self.count(n) / total
        return float(np.sqrt(frac * (1.0 - frac) / total))

    @property
    def emission_rate(self):
        return self.p_tot / self.duration if self.duration > 0 else None


def classify_bundles(clicks, t_window: float, duration: float = 0.0) -> BundleStats:
    """Group cavity clicks into maximal clusters with gaps below t_window."""
    if t_window <= 0.0:
        raise ValueError("t_window must be positive")
    cavity_times = sorted(c.time if isinstance(c, ClickRecord) else c[0]
                          for c in clicks
                          if (c.channel if isinstance(c, ClickRecord) else c[1])
                          == CAVITY)
    qubit_times = sorted(c.time if isinstance(c, ClickRecord) else c[0]
                         for c in clicks
                         if (c.channel if isinstance(c, ClickRecord) else c[1])
                         == QUBIT)

    clusters = []
    if cavity_times:
        start = prev = cavity_times[0]
        size = 1
        for t in cavity_times[1:]:
            if t - prev < t_window:
                size += 1
            else:
                clusters.append([start, prev, size])
                start, size = t, 1
            prev = t
        clusters.append([start, prev, size])

    withq = []
    histogram = {}
    for start, last, size in clusters:
        n_q = sum(1 for tq in qubit_times if start <= tq < last + t_window)
        withq.append((start, last, size, n_q))
        histogram[size] = histogram.get(size, 0) + 1

    return BundleStats(histogram=histogram, clusters=withq,
                       n_qubit_clicks=len(qubit_times), duration=duration)


def merge_bundle_stats(stats_list) -> BundleStats:
    """Order-independent aggregation across trajectories."""
    histogram = {}
    clusters = []
    n_qubit = 0
    duration = 0.0
    for st in stats_list:
        for size, cnt in st.histogram.items():
            histogram[size] = histogram.get(size, 0) + cnt
        clusters.extend(st.clusters)
        n_qubit += st.n_qubit_clicks
        duration += st.duration
    return BundleStats(histogram=histogram, clusters=clusters,
                       n_qubit_clicks=n_qubit, duration=duration)


@dataclass(frozen=True)
class PuritySweepResult:
    variable: str
    grid: np.ndarray
    pi2: np.ndarray
    stderr: np.ndarray
    n_events: np.ndarray
    omega_l: np.ndarray
    flags: list
    metadata: dict = field(default_factory=dict)


def purity_sweep(p: SystemParams, variable: str, grid, n_traj: int,
                 t_end: float, seed=0, j: int = 2, t_window: float = None,
                 relocate: bool = True, keep_fraction: float = 0.8,
                 threads: int = 1) -> PuritySweepResult:
    """Two-photon purity versus kappa or theta.

    Each grid point runs its own trajectory ensemble at the relocated
    j-photon resonance (the resonance only moves with theta, so it is cached
    per distinct angle).  Per-point failures are flagged and the sweep
    continues.
    """
    if variable not in ("kappa", "theta"):
        raise ValueError("sweep variable must be 'kappa' or 'theta'")
    if n_traj < 1:
        raise ValueError("n_traj must be >= 1")
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("sweep grid is empty")

    point_seeds = np.random.SeedSequence(entropy=seed).spawn(grid.size)
    pi2 = np.full(grid.size, np.nan)
    stderr = np.full(grid.size, np.nan)
    n_events = np.zeros(grid.size, dtype=np.int64)
    omega_l = np.full(grid.size, np.nan)
    flags = [""] * grid.size
    resonance_cache = {}

    for i, value in enumerate(grid):
        try:
            pt = p.with_(**{variable: float(value)})
            key = round(pt.theta, 12)
            if relocate:
                if key not in resonance_cache:
                    resonance_cache[key] = find_resonance(pt, j)
                pt = pt.with_(omega_L=resonance_cache[key])
            omega_l[i] = pt.omega_L
            engine = TrajectoryEngine(pt, keep_fraction=keep_fraction)
            window = t_window if t_window is not None else 10.0 / pt.kappa
            seqs = point_seeds[i].spawn(n_traj)

            def one(sq, eng=engine, win=window):
                res = eng.run(sq, t_end)
                return classify_bundles(res.clicks, win,
                                        duration=res.metadata["t_end"])

            if threads > 1:
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    stats = list(pool.map(one, seqs))
            else:
                stats = [one(sq) for sq in seqs]
            merged = merge_bundle_stats(stats)
            n_events[i] = merged.p_tot
            if merged.p_tot == 0:
                flags[i] = "no emission events"
                continue
            pi2[i] = merged.purity(2)
            stderr[i] = merged.purity_stderr(2)
        except Exception as exc:
            flags[i] = f"{type(exc).__name__}: {exc}"

    return PuritySweepResult(
        variable=variable, grid=grid, pi2=pi2, stderr=stderr,
        n_events=n_events, omega_l=omega_l, flags=flags,
        metadata={"n_traj": n_traj, "t_end": t_end, "seed": seed, "j": j,
                  "t_window": t_window if t_window is not None else "10/kappa",
                  "params": p.as_dict()})


def bundle_g2_estimator(click_lists, tau_bins, duration: float,
                        t_window: float, size: int = 2,
                        min_events: int = 1000) -> CorrelationCurve:
    """Histogram estimator of how size-n bundle arrivals correlate in time.

    For each trajectory, clusters the cavity clicks, takes the center times
    of size-`size` clusters, and histograms all ordered pair delays into
    tau_bins.  Normalization is the uncorrelated expectation for a Poisson
    process with the pooled bundle rate, so a flat curve at 1 means
    uncorrelated bundles.  Counting (Poisson) error bars are returned in the
    metadata.
    """
    tau_bins = np.asarray(tau_bins, dtype=float)
    if tau_bins.size < 2:
        raise ValueError("tau_bins must contain at least two edges")
    centers_per_traj = []
    total = 0
    for clicks in click_lists:
        stats = classify_bundles(clicks, t_window)
        centers = np.array([0.5 * (c[0] + c[1]) for c in stats.clusters
                            if c[2] == size])
        centers_per_traj.append(centers)
        total += centers.size
    if total < min_events:
        warnings.warn(f"only {total} size-{size} bundle events; estimator "
                      f"noisy below {min_events}", stacklevel=2)

    observed = np.zeros(tau_bins.size - 1)
    for centers in centers_per_traj:
        if centers.size < 2:
            continue
        delays = (centers[None, :] - centers[:, None])[
            np.triu_indices(centers.size, k=1)]
        observed += np.histogram(delays, bins=tau_bins)[0]

    n_traj = len(centers_per_traj)
    rate = total / (n_traj * duration) if n_traj and duration > 0 else 0.0
    mids = 0.5 * (tau_bins[:-1] + tau_bins[1:])
    widths = np.diff(tau_bins)
    expected = n_traj * rate ** 2 * np.maximum(duration - mids, 0.0) * widths
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.where(expected > 0, observed / expected, np.nan)
        err = np.where(expected > 0, np.sqrt(np.maximum(observed, 1.0)) / expected,
                       np.nan)
    flags = ["" if expected[i] > 0 else "no expected counts"
             for i in range(mids.size)]
    return CorrelationCurve(
        tau=mids, g=g, flags=flags,
        metadata={"estimator": "bundle pair histogram", "stderr": err,
                  "size": size, "n_events": total, "rate": rate,
                  "t_window": t_window})
