"""Deterministic time evolution: closed Schrodinger dynamics, the dressed
Lindblad master equation, and the periodic steady state.

The master equation is

    drho/dt = i[rho, H(t)] + kappa L[X] rho + gamma_q L[D] rho,
    L[C] rho = (2 C rho C^dag - rho C^dag C - C^dag C rho)/2,

with X and D the energy-lowering jump operators of the dressed basis.  All
drives are periodic, so the long-time workhorses are period-map methods (see
engine); direct integration is kept as the oracle path and for sub-period
output resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .dressed import DressedBasis, JumpOperators, jump_operators
from .engine import DrivePropagators, ReducedLiouvillian, reduced_from_basis
from .operators import basis_index, basis_labels, build_qubit_ops, build_rabi_hamiltonian, state_ket
from .params import SystemParams

NORM_DRIFT_TOL = 1e-8
TRACE_TOL = 1e-8
POSITIVITY_TOL = -1e-8


@dataclass
class EvolutionResult:
    """Sampled populations and conservation diagnostics of one evolution."""

    times: np.ndarray
    populations: np.ndarray        # shape (n_times, dim), bare-basis |<n,l|.>|^2
    labels: list
    observables: dict = field(default_factory=dict)
    final_state: np.ndarray = None
    norm_drift: float = 0.0        # max |norm - 1| (closed) or |Tr rho - 1| (open)
    hermiticity_error: float = 0.0
    min_eigenvalue: float = 0.0    # most negative eigenvalue seen (open runs)
    metadata: dict = field(default_factory=dict)

    def population(self, n: int, s) -> np.ndarray:
        """Time series of P_{n,s}; s is 0/'g' or 1/'e'."""
        if isinstance(s, str):
            s = {"g": 0, "e": 1}[s]
        n_max = self.populations.shape[1] // 2 - 1
        return self.populations[:, basis_index(n, s, n_max)]

    @property
    def conserved(self) -> bool:
        return (self.norm_drift < NORM_DRIFT_TOL
                and self.min_eigenvalue >= POSITIVITY_TOL)


def _default_psi0(p: SystemParams) -> np.ndarray:
    return state_ket(0, 0, p.n_max)


def schrodinger_evolve(p: SystemParams, psi0: np.ndarray = None,
                       t_end: float = 1000.0, dt_out: float = 10.0,
                       method: str = "auto") -> EvolutionResult:
    """Closed-system evolution under the driven Hamiltonian.

    method "stroboscopic" integrates one drive period to high accuracy and
    applies eigendecomposed powers of the period map; output times snap to
    integer periods (exact for the populations reported there) and the fast
    intra-period micro-oscillation is not sampled.  method "direct" is plain
    adaptive integration with a step ceiling of 1/50 drive period and honors
    dt_out exactly.  "auto" picks stroboscopic whenever dt_out spans at least
    one period and the run is long.
    """
    psi0 = _default_psi0(p) if psi0 is None else np.asarray(psi0, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-8:
        raise ValueError("initial state must be normalized")
    period = p.drive_period
    if method == "auto":
        method = "stroboscopic" if (dt_out >= period and t_end > 100 * period) else "direct"

    h_r = build_rabi_hamiltonian(p)
    _, sigma_x, _ = build_qubit_ops(p.n_max)

    if method == "stroboscopic":
        props = DrivePropagators(h_r, sigma_x, p.Omega_d, p.omega_L)
        stride = max(1, int(round(dt_out / period)))
        n_out = int(np.floor(t_end / (stride * period) + 1e-9)) + 1
        ms = np.arange(n_out) * stride
        states = props.stroboscopic_states(psi0, ms, unitary=True)
        times = ms * period
        norms = np.linalg.norm(states, axis=1)
        pops = np.abs(states) ** 2 / norms[:, None] ** 2
        drift = float(np.max(np.abs(norms - 1.0)))
        final = states[-1] / norms[-1]
    elif method == "direct":
        def rhs(t, u):
            psi = u.view(complex)
            h = h_r + (p.Omega_d * np.cos(p.omega_L * t)) * sigma_x
            return (-1j * (h @ psi)).ravel().view(float)

        times = np.arange(0.0, t_end + 0.5 * dt_out, dt_out)
        sol = solve_ivp(rhs, (0.0, times[-1]), psi0.ravel().view(float).copy(),
                        method="DOP853", rtol=1e-11, atol=1e-13,
                        t_eval=times, max_step=period / 50.0)
        if not sol.success:
            raise RuntimeError(f"closed-system integration failed: {sol.message}")
        states = sol.y.T.copy().view(complex)
        norms = np.linalg.norm(states, axis=1)
        pops = np.abs(states) ** 2
        drift = float(np.max(np.abs(norms - 1.0)))
        final = states[-1]
    else:
        raise ValueError(f"unknown method {method!r}")

    return EvolutionResult(times=times, populations=pops,
                           labels=basis_labels(p.n_max), final_state=final,
                           norm_drift=drift,
                           metadata={"method": method, "params": p.as_dict()})


def lindblad_rhs(rho: np.ndarray, h_t: np.ndarray, jumps: JumpOperators,
                 kappa: float, gamma_q: float) -> np.ndarray:
    """Right-hand side i[rho, H] + kappa L[X] rho + gamma_q L[D] rho."""
    out = 1j * (rho @ h_t - h_t @ rho)
    for c, rate in ((jumps.X, kappa), (jumps.D, gamma_q)):
        if rate == 0.0:
            continue
        cdc = c.conj().T @ c
        out += rate * (c @ rho @ c.conj().T - 0.5 * (rho @ cdc + cdc @ rho))
    return out


def _density_diagnostics(rhos) -> tuple:
    trace_err = max(abs(np.trace(r).real - 1.0) for r in rhos)
    herm_err = max(np.max(np.abs(r - r.conj().T)) for r in rhos)
    min_eig = min(float(np.linalg.eigvalsh(0.5 * (r + r.conj().T))[0]) for r in rhos)
    return float(trace_err), float(herm_err), min_eig


def lindblad_evolve(p: SystemParams, rho0: np.ndarray = None,
                    t_end: float = 1000.0, dt_out: float = 10.0,
                    method: str = "auto", m_levels: int = 16,
                    keep_fraction: float = 0.8,
                    observables: dict = None,
                    basis: DressedBasis = None,
                    jumps: JumpOperators = None) -> EvolutionResult:
    """Integrate the dressed master equation with the periodic drive.

    method "direct" evolves the full bare-basis density matrix (oracle path,
    cost grows quickly with t_end).  method "reduced" restricts to the lowest
    m_levels dressed states and advances whole drive periods through the
    monodromy eigendecomposition; it requires rho0 to live in that subspace
    (trace leakage above 1e-9 is rejected) and snaps output times to integer
    periods.  "auto" uses reduced for runs longer than 100 periods.
    """
    if basis is None or jumps is None:
        basis, jumps = jump_operators(p, keep_fraction=keep_fraction)
    if rho0 is None:
        g = basis.ground_state()
        rho0 = np.outer(g, g.conj())
    rho0 = np.asarray(rho0, dtype=complex)
    period = p.drive_period
    if method == "auto":
        method = "reduced" if t_end > 100 * period else "direct"
    observables = observables or {}

    if method == "direct":
        h_r = build_rabi_hamiltonian(p)
        _, sigma_x, _ = build_qubit_ops(p.n_max)
        dim = h_r.shape[0]

        def rhs(t, u):
            rho = u.view(complex).reshape(dim, dim)
            h = h_r + (p.Omega_d * np.cos(p.omega_L * t)) * sigma_x
            return lindblad_rhs(rho, h, jumps, p.kappa, p.gamma_q).ravel().view(float)

        times = np.arange(0.0, t_end + 0.5 * dt_out, dt_out)
        sol = solve_ivp(rhs, (0.0, times[-1]), rho0.ravel().view(float).copy(),
                        method="DOP853", rtol=1e-9, atol=1e-12,
                        t_eval=times, max_step=period / 50.0)
        if not sol.success:
            raise RuntimeError(f"master-equation integration failed: {sol.message}")
        rhos = [sol.y[:, k].copy().view(complex).reshape(dim, dim)
                for k in range(sol.y.shape[1])]
        pops = np.array([np.diag(r).real for r in rhos])
        obs = {name: np.array([np.trace(r @ op).real for r in rhos])
               for name, op in observables.items()}
        final = rhos[-1]
    elif method == "reduced":
        red = reduced_from_basis(basis, jumps, p, m_levels)
        v = basis.states[:, :m_levels]
        rho_red = v.conj().T @ rho0 @ v
        leak = abs(np.trace(rho0).real - np.trace(rho_red).real)
        if leak > 1e-9:
            raise ValueError(
                f"initial state leaks {leak:.2e} trace outside the lowest "
                f"{m_levels} dressed levels; increase m_levels")
        stride = max(1, int(round(dt_out / period)))
        n_out = int(np.floor(t_end / (stride * period) + 1e-9)) + 1
        ms = np.arange(n_out) * stride
        w, q, qinv = red.monodromy_eig()
        coeff = qinv @ rho_red.ravel()
        powers = np.exp(np.outer(ms.astype(float), np.log(w.astype(complex))))
        vecs = (powers * coeff[None, :]) @ q.T          # (n_out, m^2)
        times = ms * period
        rhos = [vec.reshape(m_levels, m_levels) for vec in vecs]
        rhos = [0.5 * (r + r.conj().T) for r in rhos]
        pops = np.array([np.einsum("ij,jk,ik->i", v, r, v.conj()).real for r in rhos])
        obs = {}
        for name, op in observables.items():
            op_red = v.conj().T @ op @ v
            obs[name] = np.array([np.trace(r @ op_red).real for r in rhos])
        final = v @ rhos[-1] @ v.conj().T
    else:
        raise ValueError(f"unknown method {method!r}")

    trace_err, herm_err, min_eig = _density_diagnostics(rhos)
    return EvolutionResult(times=times, populations=pops,
                           labels=basis_labels(p.n_max), observables=obs,
                           final_state=final, norm_drift=trace_err,
                           hermiticity_error=herm_err, min_eigenvalue=min_eig,
                           metadata={"method": method, "m_levels": m_levels,
                                     "params": p.as_dict()})


@dataclass(frozen=True)
class SteadyStateResult:
    """Period-averaged steady state with its convergence certificates."""

    rho_bar: np.ndarray            # bare basis
    rho_bar_reduced: np.ndarray    # lowest-m dressed basis
    m_levels: int
    n_phase: int
    residual: float                # invariance defect of the period map
    period_change: float           # relative <X^dag X> change across one period
    n_periods: int                 # periods evolved (evolve method; 0 = fixed point)
    method: str


def periodic_steady_state(p: SystemParams, n_phase: int = 16,
                          method: str = "monodromy", m_levels: int = 16,
                          keep_fraction: float = 0.8,
                          change_tol: float = 1e-6, max_periods: int = 1 << 40,
                          basis: DressedBasis = None,
                          jumps: JumpOperators = None,
                          red: ReducedLiouvillian = None) -> SteadyStateResult:
    """Periodic steady state of the driven master equation.

    method "monodromy" returns the invariant state of the one-period
    propagator directly.  method "evolve" starts from the dressed ground
    state and advances periods (doubling) until the period-averaged photon
    number changes by less than change_tol between successive periods, the
    transient-removal criterion recorded in the metadata of every artifact.
    Both report the same certificates: the period-map residual and the
    realized period-to-period change.
    """
    if p.kappa <= 0.0 and p.gamma_q <= 0.0:
        raise ValueError("steady state requires kappa > 0 or gamma_q > 0")
    if basis is None or jumps is None:
        basis, jumps = jump_operators(p, keep_fraction=keep_fraction)
    if red is None:
        red = reduced_from_basis(basis, jumps, p, m_levels)
    v = basis.states[:, :m_levels]

    if method == "monodromy":
        ss = red.steady_state(n_phase)
        rho_bar_red = ss.rho_bar
        n_periods = 0
        residual, change = ss.residual, ss.period_change
    elif method == "evolve":
        checkpoints = red.monodromy(n_phase)
        xdx = red.x_red.conj().T @ red.x_red
        g = np.zeros(m_levels, dtype=complex)
        g[0] = 1.0
        vec = np.outer(g, g.conj()).ravel()

        def period_avg(vec0):
            acc = np.zeros(m_levels ** 2, dtype=complex)
            for k in range(n_phase):
                acc += checkpoints[k] @ vec0
            rho = (acc / n_phase).reshape(m_levels, m_levels)
            return 0.5 * (rho + rho.conj().T)

        n_periods = 0
        block = 1
        while True:
            vec = red.propagate_vec(vec, block, n_phase)
            n_periods += block
            cur = np.real(np.trace(period_avg(vec) @ xdx))
            nxt = np.real(np.trace(period_avg(checkpoints[-1] @ vec) @ xdx))
            change = abs(nxt - cur) / max(abs(cur), 1e-300)
            if change < change_tol:
                break
            if n_periods >= max_periods:
                raise RuntimeError(
                    f"steady state not reached after {n_periods} periods "
                    f"(last relative change {change:.2e})")
            block = min(block * 2, max_periods - n_periods)
        rho = (vec / np.trace(vec.reshape(m_levels, m_levels)).real).reshape(
            m_levels, m_levels)
        rho_bar_red = period_avg(rho.ravel())
        residual = float(np.linalg.norm(checkpoints[-1] @ rho.ravel() - rho.ravel()))
    else:
        raise ValueError(f"unknown method {method!r}")

    rho_bar = v @ rho_bar_red @ v.conj().T
    return SteadyStateResult(rho_bar=rho_bar, rho_bar_reduced=rho_bar_red,
                             m_levels=m_levels, n_phase=n_phase,
                             residual=residual, period_change=float(change),
                             n_periods=n_periods, method=method)
