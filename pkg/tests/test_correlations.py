"""Equal-time and delayed correlations, spectrum sweep plumbing."""

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

import bundlesim as bs
from bundlesim.correlations import DenominatorUnderflow
from bundlesim.engine import reduced_from_basis
from bundlesim.operators import state_ket


def _jumps_bare_cavity():
    # lambda = 0 makes the cavity channel exactly the bare annihilator
    p = bs.SystemParams(lambda_c=0.0)
    _, jumps = bs.jump_operators(p, keep_fraction=1.0)
    return p, jumps


def test_equal_time_fock2_value():
    p, jumps = _jumps_bare_cavity()
    psi = state_ket(2, 0, p.n_max)
    rho = np.outer(psi, psi.conj())
    # <a+a+aa> = 2, <a+a> = 2 so the ratio is 2 / 4
    assert bs.g_n_equal_time(rho, jumps, 2) == pytest.approx(0.5, abs=1e-12)
    assert bs.g_n_equal_time(rho, jumps, 3) == pytest.approx(0.0, abs=1e-12)


def test_equal_time_coherent_is_poissonian():
    p, jumps = _jumps_bare_cavity()
    alpha = 0.5
    ns = np.arange(p.n_max + 1)
    amps = np.exp(-abs(alpha) ** 2 / 2) * alpha ** ns / np.sqrt(
        [math.factorial(int(n)) for n in ns])
    psi = np.zeros(p.dim, dtype=complex)
    for n in ns:
        psi[bs.operators.basis_index(int(n), 0, p.n_max)] = amps[n]
    rho = np.outer(psi, psi.conj())
    for n in (2, 3, 4):
        assert bs.g_n_equal_time(rho, jumps, n) == pytest.approx(1.0, abs=1e-6)


def test_equal_time_thermal_factorials():
    p, jumps = _jumps_bare_cavity()
    nbar = 0.3
    x = nbar / (1.0 + nbar)
    weights = (1 - x) * x ** np.arange(p.n_max + 1)
    rho = np.zeros((p.dim, p.dim), dtype=complex)
    for n, wgt in enumerate(weights):
        idx = bs.operators.basis_index(n, 0, p.n_max)
        rho[idx, idx] = wgt
    rho /= np.trace(rho).real
    # g^(n) = n! for a thermal state
    assert bs.g_n_equal_time(rho, jumps, 2) == pytest.approx(2.0, rel=1e-6)
    assert bs.g_n_equal_time(rho, jumps, 3) == pytest.approx(6.0, rel=1e-6)
    assert bs.g_n_equal_time(rho, jumps, 4) == pytest.approx(24.0, rel=1e-5)


def test_equal_time_vacuum_is_rejected_not_zero():
    p, jumps = _jumps_bare_cavity()
    psi = state_ket(0, 0, p.n_max)
    rho = np.outer(psi, psi.conj())
    with pytest.raises(DenominatorUnderflow):
        bs.g_n_equal_time(rho, jumps, 2)


def test_equal_time_order_validation():
    p, jumps = _jumps_bare_cavity()
    rho = np.eye(p.dim, dtype=complex) / p.dim
    with pytest.raises(ValueError):
        bs.g_n_equal_time(rho, jumps, 1)


def test_spectrum_zero_drive_is_flat_at_ground_value():
    p = bs.SystemParams(Omega_d=0.0)
    res = bs.excitation_spectrum(p, np.array([1.8, 2.0, 2.2]),
                                 m_levels=8, n_phase=4)
    assert np.all(np.abs(res.values["xdx"]) < 1e-12)
    assert np.all(np.isnan(res.values["g2"]))
    assert all("DenominatorUnderflow" in f for f in res.flags)


def test_spectrum_grid_validation(p_even):
    with pytest.raises(ValueError):
        bs.excitation_spectrum(p_even, np.array([]))
    with pytest.raises(ValueError):
        bs.excitation_spectrum(p_even, np.array([2.0, 1.9]))


def test_spectrum_threaded_matches_serial(p_even, bj_even):
    basis, jumps = bj_even
    grid = np.array([1.95, 2.05, 2.15])
    kw = dict(m_levels=10, n_phase=4, basis=basis, jumps=jumps)
    serial = bs.excitation_spectrum(p_even, grid, threads=1, **kw)
    threaded = bs.excitation_spectrum(p_even, grid, threads=2, **kw)
    for name in ("xdx", "g2", "g3", "g4"):
        assert np.array_equal(serial.values[name], threaded.values[name],
                              equal_nan=True)


def test_delay_below_bundle_width_is_rejected(p_even):
    tau_min = 1.0 / p_even.kappa
    with pytest.raises(ValueError, match="tau_min"):
        bs.g2_bundle_tau(p_even, [0.5 * tau_min])


def test_delay_grid_must_be_nonempty(p_even):
    with pytest.raises(ValueError):
        bs.g2_bundle_tau(p_even, [])


@pytest.fixture(scope="module")
def p_fast_decay():
    # large kappa keeps tau_min at a couple dozen drive periods so a direct
    # integration oracle is affordable
    p = bs.SystemParams(kappa=0.05, gamma_q=2.5e-3)
    return p.with_(omega_L=bs.find_resonance(p, j=2))


def test_regression_numerator_matches_direct_integration(p_fast_decay):
    p = p_fast_decay
    basis, jumps = bs.jump_operators(p)
    taus = [25.0, 60.0]
    curve = bs.g2_bundle_tau(p, taus, n_phase=4, m_levels=10,
                             basis=basis, jumps=jumps)

    red = reduced_from_basis(basis, jumps, p, 10)
    ss = red.steady_state(4)
    xs = red.x_red @ red.x_red
    obs = xs.conj().T @ xs
    den = np.real(np.trace(ss.rho_bar @ obs)) ** 2
    period = red.period

    def propagate(vec0, t_start, t_len):
        def rhs(t, u):
            gen = red.l_static + np.cos(p.omega_L * t) * red.l_drive
            return (gen @ u.view(complex)).ravel().view(float)
        sol = solve_ivp(rhs, (t_start, t_start + t_len),
                        vec0.ravel().view(float).copy(), method="DOP853",
                        rtol=1e-11, atol=1e-13)
        assert sol.success
        return sol.y[:, -1].copy().view(complex)

    for i, tau in enumerate(taus):
        m = max(1, round(tau / period))
        vals = []
        for j, rho_j in enumerate(ss.rho_phases):
            cond = xs @ rho_j @ xs.conj().T
            out = propagate(cond.astype(complex), j * period / 4, m * period)
            vals.append(np.real(obs.T.ravel() @ out))
        g_direct = np.mean(vals) / den
        assert curve.g[i] == pytest.approx(g_direct, rel=1e-4)


def test_delay_axis_snaps_to_whole_periods(p_fast_decay):
    p = p_fast_decay
    curve = bs.g2_bundle_tau(p, [25.0], n_phase=4, m_levels=10)
    period = p.drive_period
    m = round(curve.tau[0] / period)
    assert curve.tau[0] == pytest.approx(m * period, rel=1e-12)
    assert abs(curve.tau[0] - 25.0) < period


def test_phase_sampling_is_converged(p_fast_decay):
    p = p_fast_decay
    tau = [30.0]
    a = bs.g2_bundle_tau(p, tau, n_phase=4, m_levels=10).g[0]
    b = bs.g2_bundle_tau(p, tau, n_phase=8, m_levels=10).g[0]
    assert abs(a - b) / abs(b) < 0.02


def test_bundle_correlation_decays_to_unity(p_even_res, bj_even):
    # the recovery time is set by the slow pumping cycle, many times 1/kappa
    basis, jumps = bj_even
    tau_far = 100.0 / p_even_res.kappa
    curve = bs.g2_bundle_tau(p_even_res, [tau_far], basis=basis, jumps=jumps)
    assert curve.g[0] == pytest.approx(1.0, abs=0.05)
    assert curve.flags[0] == ""
