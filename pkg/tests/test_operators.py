"""Bare-basis operator construction and the parity algebra."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import bundlesim as bs
from bundlesim.operators import (
    basis_index,
    basis_labels,
    build_cavity_ops,
    build_full_hamiltonian,
    build_parity_operator,
    build_qubit_ops,
    build_rabi_hamiltonian,
    state_ket,
)

N_MAX = 20


@given(n=st.integers(0, 30), s=st.integers(0, 1))
def test_basis_index_round_trip(n, s):
    idx = basis_index(n, s, n_max=30)
    labels = basis_labels(30)
    assert labels[idx] == f"{n}{'e' if s else 'g'}"
    assert idx == 2 * n + s


def test_basis_index_range_checks():
    with pytest.raises(ValueError):
        basis_index(N_MAX + 1, 0, N_MAX)
    with pytest.raises(ValueError):
        basis_index(-1, 0, N_MAX)
    with pytest.raises(ValueError):
        basis_index(0, 2, N_MAX)


def test_annihilation_matrix_elements():
    a, ad = build_cavity_ops(N_MAX)
    ket = state_ket
    # <0,g| a |1,g> = 1 and <2,g| a |3,g> = sqrt(3)
    v01 = ket(0, 0, N_MAX).conj() @ a @ ket(1, 0, N_MAX)
    v23 = ket(2, 0, N_MAX).conj() @ a @ ket(3, 0, N_MAX)
    assert v01 == pytest.approx(1.0)
    assert v23 == pytest.approx(np.sqrt(3.0))
    assert np.allclose(a @ ket(0, 0, N_MAX), 0.0)
    assert np.allclose(a @ ket(0, 1, N_MAX), 0.0)
    assert np.allclose(ad, a.conj().T)


@given(n_max=st.integers(2, 12))
@settings(max_examples=20, deadline=None)
def test_ladder_commutator_identity_below_cutoff(n_max):
    a, ad = build_cavity_ops(n_max)
    comm = a @ ad - ad @ a
    ident = np.eye(2 * (n_max + 1))
    # the truncation corrupts only the highest Fock block
    top = [basis_index(n_max, s, n_max) for s in (0, 1)]
    keep = np.setdiff1d(np.arange(ident.shape[0]), top)
    assert np.allclose(comm[np.ix_(keep, keep)], ident[np.ix_(keep, keep)],
                       atol=1e-12)


def test_qubit_ops_algebra():
    sm, sx, sz = build_qubit_ops(N_MAX)
    dim = 2 * (N_MAX + 1)
    assert np.allclose(sx @ sx, np.eye(dim))
    assert np.allclose(sz @ sz, np.eye(dim))
    assert np.allclose(sm @ sm, 0.0)
    g, e = state_ket(0, 0, N_MAX), state_ket(0, 1, N_MAX)
    assert g.conj() @ sz @ g == pytest.approx(-1.0)
    assert e.conj() @ sz @ e == pytest.approx(+1.0)
    assert np.allclose(sm @ e, g)
    assert np.allclose(sm @ g, 0.0)
    assert np.allclose(sx, sm + sm.conj().T)


def test_rabi_matrix_against_direct_kron():
    p = bs.SystemParams(n_max=6)
    h = build_rabi_hamiltonian(p)
    a, ad = build_cavity_ops(6)
    _, sx, sz = build_qubit_ops(6)
    coup = np.cos(p.theta) * sz - np.sin(p.theta) * sx
    ref = 0.5 * p.omega_q * sz + p.omega_r * (ad @ a) + p.lambda_c * coup @ (a + ad)
    assert np.allclose(h, ref, atol=1e-14)
    assert np.allclose(h, h.conj().T)


def test_rabi_uncoupled_eigenvalues():
    p = bs.SystemParams(lambda_c=0.0, n_max=8)
    h = build_rabi_hamiltonian(p)
    evals = np.sort(np.linalg.eigvalsh(h))
    # n omega_r +/- omega_q / 2
    assert evals[0] == pytest.approx(-2.5)
    assert evals[1] == pytest.approx(-1.5)
    assert evals[2] == pytest.approx(-0.5)


def test_full_hamiltonian_drive_term():
    p = bs.SystemParams(n_max=5)
    h_r = build_rabi_hamiltonian(p)
    _, sx, _ = build_qubit_ops(5)
    t = 0.37
    h_t = build_full_hamiltonian(p, t)
    ref = h_r + p.Omega_d * np.cos(p.omega_L * t) * sx
    assert np.allclose(h_t, ref, atol=1e-14)
    # one full period later the drive repeats
    assert np.allclose(h_t, build_full_hamiltonian(p, t + p.drive_period),
                       atol=1e-12)
    # zero amplitude kills the time dependence
    p0 = p.with_(Omega_d=0.0)
    assert np.allclose(build_full_hamiltonian(p0, t), h_r)


@given(n=st.integers(0, 10), s=st.integers(0, 1))
@settings(max_examples=30, deadline=None)
def test_parity_diagonal_values(n, s):
    pi = build_parity_operator(10)
    idx = basis_index(n, s, 10)
    assert pi[idx, idx] == pytest.approx((-1.0) ** (n + s))


def test_parity_involution_and_signs():
    pi = build_parity_operator(N_MAX)
    dim = 2 * (N_MAX + 1)
    assert np.allclose(pi @ pi, np.eye(dim))
    assert np.allclose(pi, pi.conj().T)
    assert np.count_nonzero(pi - np.diag(np.diag(pi))) == 0
    assert pi[basis_index(0, 0, N_MAX)][basis_index(0, 0, N_MAX)] == 1.0
    assert pi[basis_index(0, 1, N_MAX)][basis_index(0, 1, N_MAX)] == -1.0
    assert pi[basis_index(2, 1, N_MAX)][basis_index(2, 1, N_MAX)] == -1.0


def test_parity_commutes_only_at_orthogonal_mixing():
    pi = build_parity_operator(N_MAX)
    h_even = build_rabi_hamiltonian(bs.SystemParams())
    norm = np.max(np.abs(h_even))
    comm = pi @ h_even - h_even @ pi
    assert np.max(np.abs(comm)) <= 1e-12 * norm
    h_tilt = build_rabi_hamiltonian(bs.SystemParams(theta=np.pi / 6))
    comm_t = pi @ h_tilt - h_tilt @ pi
    assert np.max(np.abs(comm_t)) > 1e-3 * np.max(np.abs(h_tilt))


def test_state_ket_is_unit_basis_vector():
    v = state_ket(4, 1, N_MAX)
    assert v[basis_index(4, 1, N_MAX)] == 1.0
    assert np.linalg.norm(v) == 1.0
    assert v.dtype == np.complex128


def test_builders_are_deterministic():
    p = bs.SystemParams(theta=np.pi / 5)
    assert np.array_equal(build_rabi_hamiltonian(p), build_rabi_hamiltonian(p))
    a1, _ = build_cavity_ops(7)
    a2, _ = build_cavity_ops(7)
    assert np.array_equal(a1, a2)
