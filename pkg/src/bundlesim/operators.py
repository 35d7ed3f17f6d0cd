"""Bare operators on the joint qubit-cavity Hilbert space.

Basis ordering is fixed everywhere in this package: the product state
|n> (x) |s> with photon number n and qubit level s (0 = g, 1 = e) sits at
index 2*n + s.  Use basis_index / basis_labels rather than re-deriving the
arithmetic; every module relies on this single convention.

Operators are dense complex matrices.  At the default truncation
(n_max = 20, dimension 42) dense algebra is faster than any sparse machinery.
"""

from __future__ import annotations

import numpy as np

from .params import SystemParams

QUBIT_LEVELS = ("g", "e")


def basis_index(n: int, s: int, n_max: int) -> int:
    """Index of the bare state |n, s> with s = 0 for g, 1 for e."""
    if not 0 <= n <= n_max:
        raise ValueError(f"photon number {n} outside 0..{n_max}")
    if s not in (0, 1):
        raise ValueError(f"qubit level must be 0 (g) or 1 (e), got {s}")
    return 2 * n + s


def basis_labels(n_max: int) -> list[str]:
    """Human-readable labels ('0g', '0e', '1g', ...) in basis order."""
    return [f"{n}{QUBIT_LEVELS[s]}" for n in range(n_max + 1) for s in (0, 1)]


def state_ket(n: int, s: int, n_max: int) -> np.ndarray:
    """Unit column vector for the bare state |n, s>."""
    psi = np.zeros(2 * (n_max + 1), dtype=complex)
    psi[basis_index(n, s, n_max)] = 1.0
    return psi


def build_cavity_ops(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Annihilation and creation operators a, a_dag on the joint space."""
    if int(n_max) != n_max or n_max < 1:
        raise ValueError(f"n_max must be an integer >= 1, got {n_max}")
    nf = int(n_max) + 1
    a_fock = np.diag(np.sqrt(np.arange(1, nf)), 1)
    a = np.kron(a_fock, np.eye(2)).astype(complex)
    return a, a.conj().T


def build_qubit_ops(n_max: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Lowering sigma = |g><e|, sigma_x and sigma_z, tensored with the Fock identity."""
    if int(n_max) != n_max or n_max < 1:
        raise ValueError(f"n_max must be an integer >= 1, got {n_max}")
    eye_f = np.eye(int(n_max) + 1)
    sigma = np.kron(eye_f, np.array([[0.0, 1.0], [0.0, 0.0]])).astype(complex)
    sigma_x = np.kron(eye_f, np.array([[0.0, 1.0], [1.0, 0.0]])).astype(complex)
    sigma_z = np.kron(eye_f, np.diag([-1.0, 1.0])).astype(complex)
    return sigma, sigma_x, sigma_z


def build_rabi_hamiltonian(p: SystemParams) -> np.ndarray:
    """Undriven Hamiltonian (omega_q/2) sz + omega_r a+a + coupling term.

    The coupling is lambda_c*(cos(theta) sz - sin(theta) sx)(a_dag + a); at
    theta = pi/2 it reduces to the standard transverse Rabi form.
    """
    a, a_dag = build_cavity_ops(p.n_max)
    _, sigma_x, sigma_z = build_qubit_ops(p.n_max)
    coupling = np.cos(p.theta) * sigma_z - np.sin(p.theta) * sigma_x
    h = (0.5 * p.omega_q * sigma_z
         + p.omega_r * (a_dag @ a)
         + p.lambda_c * (coupling @ (a_dag + a)))
    return 0.5 * (h + h.conj().T)


def build_full_hamiltonian(p: SystemParams, t: float) -> np.ndarray:
    """Driven Hamiltonian H(t) = H_R + Omega_d cos(omega_L t) sigma_x."""
    _, sigma_x, _ = build_qubit_ops(p.n_max)
    return build_rabi_hamiltonian(p) + (p.Omega_d * np.cos(p.omega_L * t)) * sigma_x


def build_parity_operator(n_max: int) -> np.ndarray:
    """Parity exp{i pi [a+a + (sz+1)/2]}: diagonal with entries (-1)^(n+s)."""
    if int(n_max) != n_max or n_max < 1:
        raise ValueError(f"n_max must be an integer >= 1, got {n_max}")
    diag = np.empty(2 * (int(n_max) + 1))
    for n in range(int(n_max) + 1):
        for s in (0, 1):
            diag[basis_index(n, s, n_max)] = (-1.0) ** (n + s)
    return np.diag(diag).astype(complex)
