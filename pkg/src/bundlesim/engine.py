"""Period-propagator engines for the time-periodic drive.

Everything driven in this package is periodic with the drive period
T = 2*pi/omega_L, so long evolutions factor into one integration over a
single period plus matrix powers of the resulting one-period map.  Two
engines share that idea:

DrivePropagators  evolves state vectors under H(t) = H0 + Om cos(wL t) sx,
                  where H0 may carry an anti-Hermitian decay part (quantum
                  jump no-click evolution).  Stores propagators to a grid of
                  intra-period nodes and doubling period strides.

ReducedLiouvillian  evolves density matrices restricted to the lowest M
                  dressed levels, as a vectorized superoperator
                  L(t) = L0 + cos(wL t) L1, with the row-major convention
                  vec(A rho B) = (A kron B^T) vec(rho).  Used for periodic
                  steady states, spectra, and two-time correlations; the M
                  levels retained must cover every state the drive populates
                  (checked by convergence in M at the paper regimes).

Complex state is carried through scipy integrators as float views; slices
coming back from solve_ivp need .copy() before .view(complex) because the
returned columns are not contiguous.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

DEFAULT_RTOL = 1e-11
DEFAULT_ATOL = 1e-13


def _integrate_matrix(rhs_matrix, t_span, m_init, t_eval, rtol, atol):
    """Integrate dM/dt = rhs_matrix(t) @ M as a flattened complex system."""
    dim = m_init.shape[0]

    def rhs(t, u):
        m = u.view(complex).reshape(dim, dim)
        return (rhs_matrix(t) @ m).ravel().view(float)

    sol = solve_ivp(rhs, t_span, m_init.astype(complex).ravel().view(float),
                    method="DOP853", rtol=rtol, atol=atol, t_eval=t_eval)
    if not sol.success:
        raise RuntimeError(f"period integration failed: {sol.message}")
    return [sol.y[:, k].copy().view(complex).reshape(dim, dim)
            for k in range(sol.y.shape[1])]


class DrivePropagators:
    """Node propagators and period strides for state-vector evolution."""

    def __init__(self, h_static: np.ndarray, sigma_x: np.ndarray,
                 drive_amplitude: float, omega_l: float,
                 n_nodes: int = 64, n_strides: int = 26,
                 rtol: float = DEFAULT_RTOL, atol: float = DEFAULT_ATOL):
        self.dim = h_static.shape[0]
        self.h_static = h_static
        self.sigma_x = sigma_x
        self.drive_amplitude = drive_amplitude
        self.omega_l = omega_l
        self.period = 2.0 * np.pi / omega_l
        self.n_nodes = n_nodes
        self.node_times = np.linspace(0.0, self.period, n_nodes + 1)

        def generator(t):
            return -1j * (h_static + (drive_amplitude * np.cos(omega_l * t)) * sigma_x)

        self.node_props = _integrate_matrix(
            generator, (0.0, self.period), np.eye(self.dim), self.node_times,
            rtol, atol)
        period_map = self.node_props[-1]
        self.strides = [period_map]
        for _ in range(n_strides - 1):
            self.strides.append(self.strides[-1] @ self.strides[-1])
        self._eig = None

    def segment(self, psi: np.ndarray, t_local_start: float, t_local_end: float,
                period_index: int):
        """Dense-output integration of one intra-period stretch."""
        offset = period_index * self.period
        h0, sx = self.h_static, self.sigma_x
        amp, wl = self.drive_amplitude, self.omega_l

        def rhs(t, u):
            p = u.view(complex)
            h = h0 + (amp * np.cos(wl * (offset + t))) * sx
            return (-1j * (h @ p)).ravel().view(float)

        sol = solve_ivp(rhs, (t_local_start, t_local_end),
                        psi.astype(complex).ravel().view(float).copy(),
                        method="DOP853", rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL,
                        dense_output=True)
        if not sol.success:
            raise RuntimeError(f"segment integration failed: {sol.message}")
        return sol

    def period_map_eig(self, unitary: bool):
        """Eigendecomposition of the one-period map, cached.

        With unitary=True the eigenvalues are rescaled to unit modulus,
        removing the integrator's tiny modulus drift so that stroboscopic
        powers stay norm-preserving over millions of periods.
        """
        if self._eig is None:
            w, q = np.linalg.eig(self.strides[0])
            if unitary:
                w = w / np.abs(w)
            self._eig = (w, q, np.linalg.inv(q))
        return self._eig

    def stroboscopic_states(self, psi0: np.ndarray, period_indices: np.ndarray,
                            unitary: bool = True) -> np.ndarray:
        """States at integer periods m*T for every m in period_indices.

        Returns an array of shape (len(period_indices), dim).
        """
        w, q, qinv = self.period_map_eig(unitary)
        modes = q * (qinv @ psi0)[None, :]
        log_w = np.log(w.astype(complex))
        powers = np.exp(np.outer(period_indices.astype(float), log_w))
        return powers @ modes.T

    def state_at_node(self, psi_boundary: np.ndarray, node: int) -> np.ndarray:
        """State at node time t_k given the state at the period boundary."""
        return self.node_props[node] @ psi_boundary


@dataclass(frozen=True)
class SteadyState:
    """Periodic steady state of the reduced Liouvillian.

    rho_phases  density matrices at the phase-sample times (reduced basis)
    rho_bar     period-averaged density matrix (reduced basis)
    residual    ||Phi(T) vec(rho0) - vec(rho0)||, invariance of the period map
    period_change  relative change of the period-averaged photon number
                   between two successive periods (steadiness certificate)
    """

    rho_phases: list
    rho_bar: np.ndarray
    residual: float
    period_change: float


class ReducedLiouvillian:
    """Dressed-subspace Lindblad superoperator with a cosine drive."""

    def __init__(self, energies: np.ndarray, x_red: np.ndarray, d_red: np.ndarray,
                 sx_red: np.ndarray, kappa: float, gamma_q: float,
                 drive_amplitude: float, omega_l: float,
                 rtol: float = 1e-10, atol: float = 1e-12):
        self.m_levels = len(energies)
        self.x_red = x_red
        self.d_red = d_red
        self.omega_l = omega_l
        self.period = 2.0 * np.pi / omega_l
        self.rtol, self.atol = rtol, atol

        m = self.m_levels
        eye = np.eye(m)
        h0 = np.diag(energies - energies[0]).astype(complex)

        def dissipator(c, rate):
            cdc = c.conj().T @ c
            return rate * (np.kron(c, c.conj())
                           - 0.5 * (np.kron(cdc, eye) + np.kron(eye, cdc.T)))

        self.l_static = (-1j * (np.kron(h0, eye) - np.kron(eye, h0.T))
                         + dissipator(x_red, kappa) + dissipator(d_red, gamma_q))
        self.l_drive = -1j * drive_amplitude * (np.kron(sx_red, eye)
                                                - np.kron(eye, sx_red.T))
        self._checkpoints = None
        self._monodromy_eig = None

    def monodromy(self, n_phase: int = 16):
        """Superoperator propagators from phase 0 to n_phase+1 equal phase samples."""
        if self._checkpoints is None or len(self._checkpoints) != n_phase + 1:
            m2 = self.m_levels ** 2
            ts = np.linspace(0.0, self.period, n_phase + 1)
            l0, l1, wl = self.l_static, self.l_drive, self.omega_l
            self._checkpoints = _integrate_matrix(
                lambda t: l0 + np.cos(wl * t) * l1,
                (0.0, self.period), np.eye(m2), ts, self.rtol, self.atol)
            self._monodromy_eig = None
        return self._checkpoints

    def monodromy_eig(self, n_phase: int = 16):
        if self._monodromy_eig is None:
            phi = self.monodromy(n_phase)[-1]
            w, q = np.linalg.eig(phi)
            self._monodromy_eig = (w, q, np.linalg.inv(q))
        return self._monodromy_eig

    def steady_state(self, n_phase: int = 16) -> SteadyState:
        """Invariant state of the one-period map, phase-resolved and averaged."""
        checkpoints = self.monodromy(n_phase)
        w, q, _ = self.monodromy_eig(n_phase)
        m = self.m_levels
        idx = int(np.argmin(np.abs(w - 1.0)))
        rho0 = q[:, idx].reshape(m, m)
        rho0 = 0.5 * (rho0 + rho0.conj().T)
        trace = np.trace(rho0).real
        if abs(trace) < 1e-12:
            raise RuntimeError("steady-state eigenvector has vanishing trace")
        rho0 = rho0 / trace

        residual = float(np.linalg.norm(checkpoints[-1] @ rho0.ravel() - rho0.ravel()))
        phases = []
        rho_bar = np.zeros_like(rho0)
        for k in range(n_phase):
            rho_k = (checkpoints[k] @ rho0.ravel()).reshape(m, m)
            rho_k = 0.5 * (rho_k + rho_k.conj().T)
            phases.append(rho_k)
            rho_bar += rho_k
        rho_bar /= n_phase

        # steadiness certificate: photon number averaged over one period,
        # compared with the same average one period later
        xdx = self.x_red.conj().T @ self.x_red
        avg_now = np.real(np.trace(rho_bar @ xdx))
        rho_next = [
            (checkpoints[k] @ (checkpoints[-1] @ rho0.ravel())).reshape(m, m)
            for k in range(n_phase)]
        avg_next = np.real(np.trace(sum(rho_next) / n_phase @ xdx))
        scale = max(abs(avg_now), 1e-300)
        period_change = float(abs(avg_next - avg_now) / scale)

        return SteadyState(rho_phases=phases, rho_bar=rho_bar,
                           residual=residual, period_change=period_change)

    def propagate_vec(self, vec: np.ndarray, n_periods: int,
                      n_phase: int = 16) -> np.ndarray:
        """Apply the one-period map n_periods times to a vectorized state."""
        w, q, qinv = self.monodromy_eig(n_phase)
        powers = np.exp(n_periods * np.log(w.astype(complex)))
        return q @ (powers * (qinv @ vec))

    def evolve_rho(self, rho0: np.ndarray, t_end: float, n_eval: int):
        """Direct integration of the reduced master equation (oracle path).

        Slow compared with the monodromy route; used for cross-validation and
        for transients that are short in units of the drive period.
        """
        m = self.m_levels
        l0, l1, wl = self.l_static, self.l_drive, self.omega_l

        def rhs(t, u):
            return ((l0 + np.cos(wl * t) * l1) @ u.view(complex)).ravel().view(float)

        ts = np.linspace(0.0, t_end, n_eval)
        sol = solve_ivp(rhs, (0.0, t_end), rho0.astype(complex).ravel().view(float).copy(),
                        method="DOP853", rtol=self.rtol, atol=self.atol, t_eval=ts)
        if not sol.success:
            raise RuntimeError(f"reduced master equation failed: {sol.message}")
        rhos = [sol.y[:, k].copy().view(complex).reshape(m, m)
                for k in range(sol.y.shape[1])]
        return ts, rhos


def reduced_from_basis(basis, jumps, p, m_levels: int,
                       rtol: float = 1e-10, atol: float = 1e-12) -> ReducedLiouvillian:
    """Restrict the jump operators and drive to the lowest m_levels dressed states."""
    from .operators import build_qubit_ops

    states = basis.states[:, :m_levels]
    x_red = states.conj().T @ jumps.X @ states
    d_red = states.conj().T @ jumps.D @ states
    _, sigma_x, _ = build_qubit_ops(p.n_max)
    sx_red = states.conj().T @ sigma_x @ states
    return ReducedLiouvillian(basis.energies[:m_levels], x_red, d_red, sx_red,
                              p.kappa, p.gamma_q, p.Omega_d, p.omega_L,
                              rtol=rtol, atol=atol)
