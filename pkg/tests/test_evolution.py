"""Closed and open time evolution plus the periodic steady state."""

import numpy as np
import pytest

import bundlesim as bs
from bundlesim.engine import reduced_from_basis
from bundlesim.operators import build_rabi_hamiltonian, state_ket


def test_trivial_vacuum_stays_put():
    p = bs.SystemParams(lambda_c=0.0, Omega_d=0.0)
    res = bs.schrodinger_evolve(p, t_end=200.0, dt_out=20.0)
    assert np.allclose(res.population(0, "g"), 1.0, atol=1e-12)
    assert res.norm_drift < 1e-10


def test_stroboscopic_and_direct_integrators_agree(p_even):
    # two independent integration routes; agreement also covers the
    # tolerance-robustness requirement on the reported populations
    t_end = 40 * p_even.drive_period
    strobe = bs.schrodinger_evolve(p_even, t_end=t_end,
                                   dt_out=10 * p_even.drive_period,
                                   method="stroboscopic")
    direct = bs.schrodinger_evolve(p_even, t_end=t_end,
                                   dt_out=10 * p_even.drive_period,
                                   method="direct")
    assert np.max(np.abs(strobe.populations - direct.populations)) < 1e-6
    assert strobe.norm_drift < 1e-8
    assert direct.norm_drift < 1e-8


def test_population_accessor_names(p_even):
    res = bs.schrodinger_evolve(p_even, t_end=5 * p_even.drive_period,
                                dt_out=p_even.drive_period)
    assert np.array_equal(res.population(2, "e"), res.population(2, 1))
    assert res.populations.shape == (len(res.times), p_even.dim)
    total = res.populations.sum(axis=1)
    assert np.allclose(total, 1.0, atol=1e-9)


def test_undriven_energy_is_conserved():
    p = bs.SystemParams(Omega_d=0.0)
    h = build_rabi_hamiltonian(p)
    psi0 = (state_ket(0, 0, p.n_max) + state_ket(2, 1, p.n_max)) / np.sqrt(2)
    res = bs.schrodinger_evolve(p, psi0=psi0, t_end=500 * p.drive_period,
                                dt_out=50 * p.drive_period)
    psi_T = res.final_state
    e0 = np.real(psi0.conj() @ h @ psi0)
    e1 = np.real(psi_T.conj() @ h @ psi_T) / np.linalg.norm(psi_T) ** 2
    assert abs(e1 - e0) < 1e-8


def test_lindblad_rhs_is_traceless_and_stationary_on_ground(bj_even, p_even):
    basis, jumps = bj_even
    h = build_rabi_hamiltonian(p_even)
    rng = np.random.default_rng(3)
    z = rng.normal(size=(p_even.dim, p_even.dim)) * 1.0 + 0j
    rho = z @ z.T
    rho /= np.trace(rho)
    rhs = bs.lindblad_rhs(rho, h, jumps, p_even.kappa, p_even.gamma_q)
    assert abs(np.trace(rhs)) < 1e-12
    # dressed ground is dark for both channels and stationary without drive
    g = basis.ground_state()
    rho_g = np.outer(g, g.conj())
    rhs_g = bs.lindblad_rhs(rho_g, h, jumps, p_even.kappa, p_even.gamma_q)
    assert np.max(np.abs(rhs_g)) < 1e-10


def test_lindblad_matches_schrodinger_when_closed(p_even):
    p = p_even.with_(kappa=0.0, gamma_q=0.0)
    t_end = 8 * p.drive_period
    psi = bs.schrodinger_evolve(p, t_end=t_end, dt_out=2 * p.drive_period,
                                method="direct")
    rho = bs.lindblad_evolve(p, t_end=t_end, dt_out=2 * p.drive_period,
                             method="direct")
    g = bs.dressed_basis(p).ground_state()
    psi_from_g = bs.schrodinger_evolve(p, psi0=g, t_end=t_end,
                                       dt_out=2 * p.drive_period,
                                       method="direct")
    assert np.max(np.abs(rho.populations - psi_from_g.populations)) < 1e-6
    assert rho.conserved


def test_lindblad_direct_and_reduced_agree(p_even_res):
    t_end = 150 * p_even_res.drive_period
    dt = 50 * p_even_res.drive_period
    direct = bs.lindblad_evolve(p_even_res, t_end=t_end, dt_out=dt,
                                method="direct")
    reduced = bs.lindblad_evolve(p_even_res, t_end=t_end, dt_out=dt,
                                 method="reduced")
    assert np.max(np.abs(direct.populations - reduced.populations)) < 1e-5
    for res in (direct, reduced):
        assert abs(np.trace(res.final_state).real - 1.0) < 1e-8
        assert res.min_eigenvalue > -1e-8


def test_undriven_relaxation_reaches_ground():
    p = bs.SystemParams(Omega_d=0.0, kappa=2e-2, gamma_q=1e-3)
    basis, jumps = bs.jump_operators(p)
    # start two levels up, let both channels drain the excitation
    psi = basis.states[:, 2]
    rho0 = np.outer(psi, psi.conj())
    res = bs.lindblad_evolve(p, rho0=rho0, t_end=600.0, dt_out=100.0,
                             method="reduced", basis=basis, jumps=jumps)
    p_ground = np.abs(basis.states[:, 0].conj() @ res.final_state
                      @ basis.states[:, 0])
    assert p_ground > 0.99
    assert res.conserved


def test_reduced_rejects_initial_state_outside_subspace(p_even):
    basis, jumps = bs.jump_operators(p_even)
    hi = basis.states[:, 30]
    rho0 = np.outer(hi, hi.conj())
    with pytest.raises(ValueError, match="m_levels"):
        bs.lindblad_evolve(p_even, rho0=rho0, t_end=100.0, dt_out=10.0,
                           method="reduced", m_levels=16,
                           basis=basis, jumps=jumps)


def test_steady_state_monodromy_certificates(p_even_res):
    ss = bs.periodic_steady_state(p_even_res, n_phase=16, m_levels=16)
    assert ss.period_change < 1e-6
    assert ss.residual < 1e-8
    rho = ss.rho_bar
    assert abs(np.trace(rho).real - 1.0) < 1e-8
    assert np.min(np.linalg.eigvalsh(rho)) > -1e-8


def test_steady_state_two_routes_agree(p_even_res, bj_even):
    basis, jumps = bj_even
    mono = bs.periodic_steady_state(p_even_res, n_phase=8, m_levels=14,
                                    basis=basis, jumps=jumps)
    evol = bs.periodic_steady_state(p_even_res, n_phase=8, m_levels=14,
                                    method="evolve", basis=basis, jumps=jumps)
    xdx = jumps.X.conj().T @ jumps.X
    a = np.real(np.trace(mono.rho_bar @ xdx))
    b = np.real(np.trace(evol.rho_bar @ xdx))
    assert abs(a - b) / a < 5e-3
    assert evol.n_periods > 0


def test_undriven_steady_state_is_dark(p_even, bj_even):
    basis, jumps = bj_even
    p0 = p_even.with_(Omega_d=0.0)
    ss = bs.periodic_steady_state(p0, n_phase=4, m_levels=8,
                                  basis=basis, jumps=jumps)
    g = basis.ground_state()
    fidelity = np.real(g.conj() @ ss.rho_bar @ g)
    assert fidelity > 1.0 - 1e-6


def test_off_resonant_drive_leaves_cavity_dim(p_even, p_even_res, bj_even):
    basis, jumps = bj_even
    xdx = jumps.X.conj().T @ jumps.X
    on = bs.periodic_steady_state(p_even_res, n_phase=8, m_levels=16,
                                  basis=basis, jumps=jumps)
    off = bs.periodic_steady_state(p_even.with_(omega_L=p_even.omega_q + 1.5),
                                   n_phase=8, m_levels=16,
                                   basis=basis, jumps=jumps)
    bright = np.real(np.trace(on.rho_bar @ xdx))
    dim_val = np.real(np.trace(off.rho_bar @ xdx))
    assert bright > 10 * dim_val
