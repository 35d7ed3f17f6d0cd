"""Dressed eigenbasis of the undriven Hamiltonian and the renormalized
jump operators.

The emission operators are built from matrix elements of the field
quadratures between eigenstates of the coupled Hamiltonian, keeping only
strictly energy-lowering terms: X = sum over E_n < E_m of
<psi_n|(a + a_dag)|psi_m> |psi_n><psi_m|, and D analogously with
(sigma + sigma_dag).  Elements inside a degenerate subspace transfer no
energy to the bath and are excluded.

The top fraction of the truncated spectrum is contaminated by the Fock
cutoff, so those levels are excluded from the sums by default
(keep_fraction).  The paper-regime dynamics never populates them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import build_cavity_ops, build_parity_operator, build_qubit_ops, \
    build_rabi_hamiltonian
from .params import SystemParams

DEGENERACY_GAP = 1e-12


@dataclass(frozen=True)
class DressedBasis:
    """Sorted eigensystem of the undriven Hamiltonian with parity labels.

    energies  ascending eigenvalues
    states    orthonormal eigenvectors as columns, bare-basis components
    parities  real expectation <psi_n|Pi|psi_n> in [-1, 1] per eigenstate
    """

    energies: np.ndarray
    states: np.ndarray
    parities: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.energies)

    def ground_state(self) -> np.ndarray:
        return self.states[:, 0].copy()


@dataclass(frozen=True)
class JumpOperators:
    """Energy-lowering emission operators in the bare basis.

    X  cavity channel, from (a + a_dag) matrix elements
    D  qubit channel, from (sigma + sigma_dag) matrix elements
    """

    X: np.ndarray
    D: np.ndarray


@dataclass(frozen=True)
class TruncationReport:
    """Convergence of the lowest dynamically relevant levels under a larger cutoff."""

    n_levels: int
    energy_shift: float
    element_shift: float
    tolerance: float

    @property
    def converged(self) -> bool:
        return (self.energy_shift <= self.tolerance
                and self.element_shift <= self.tolerance)


def diagonalize(h_rabi: np.ndarray, parity: np.ndarray) -> DressedBasis:
    """Eigendecompose a Hermitian Hamiltonian and label eigenstates by parity.

    Within any degenerate energy subspace the eigenvectors are rotated to
    diagonalize the parity operator, so each returned state has definite
    parity whenever [Pi, H] = 0.
    """
    if np.max(np.abs(h_rabi - h_rabi.conj().T)) > 1e-10:
        raise ValueError("Hamiltonian is not Hermitian")
    energies, states = np.linalg.eigh(h_rabi)

    # re-diagonalize parity inside (near-)degenerate clusters
    start = 0
    dim = len(energies)
    while start < dim:
        stop = start + 1
        while stop < dim and energies[stop] - energies[stop - 1] < DEGENERACY_GAP:
            stop += 1
        if stop - start > 1:
            block = states[:, start:stop]
            pi_block = block.conj().T @ parity @ block
            _, rot = np.linalg.eigh(0.5 * (pi_block + pi_block.conj().T))
            states[:, start:stop] = block @ rot
        start = stop

    parities = np.real(np.einsum("in,ij,jn->n", states.conj(), parity, states))
    return DressedBasis(energies=energies, states=states, parities=parities)


def dressed_basis(p: SystemParams) -> DressedBasis:
    """Diagonalize the undriven Hamiltonian for the given parameters."""
    return diagonalize(build_rabi_hamiltonian(p), build_parity_operator(p.n_max))


def _lowering_filter(basis: DressedBasis, op: np.ndarray,
                     keep_fraction: float) -> np.ndarray:
    """Keep only energy-lowering matrix elements of op among retained levels."""
    energies, states = basis.energies, basis.states
    dim = basis.dim
    keep = int(round(keep_fraction * dim))
    dressed_op = states.conj().T @ op @ states
    lowering = energies[:, None] < energies[None, :] - DEGENERACY_GAP
    mask = np.zeros((dim, dim), dtype=bool)
    mask[:keep, :keep] = lowering[:keep, :keep]
    filtered = np.where(mask, dressed_op, 0.0)
    return states @ filtered @ states.conj().T


def build_jump_operators(basis: DressedBasis, a: np.ndarray, sigma: np.ndarray,
                         keep_fraction: float = 0.8) -> JumpOperators:
    """Renormalized jump operators X (cavity) and D (qubit) in the bare basis."""
    if a.shape != (basis.dim, basis.dim) or sigma.shape != (basis.dim, basis.dim):
        raise ValueError("operator dimension does not match the basis")
    if not 0.0 < keep_fraction <= 1.0:
        raise ValueError(f"keep_fraction must be in (0, 1], got {keep_fraction}")
    x = _lowering_filter(basis, a + a.conj().T, keep_fraction)
    d = _lowering_filter(basis, sigma + sigma.conj().T, keep_fraction)
    return JumpOperators(X=x, D=d)


def jump_operators(p: SystemParams, keep_fraction: float = 0.8,
                   basis: DressedBasis | None = None) -> tuple[DressedBasis, JumpOperators]:
    """Convenience: dressed basis plus jump operators for the given parameters."""
    if basis is None:
        basis = dressed_basis(p)
    a, _ = build_cavity_ops(p.n_max)
    sigma, _, _ = build_qubit_ops(p.n_max)
    return basis, build_jump_operators(basis, a, sigma, keep_fraction)


def check_truncation(basis: DressedBasis, p: SystemParams,
                     n_dynamics: int = 10, margin: int = 5,
                     tolerance: float = 1e-6) -> TruncationReport:
    """Compare the lowest 2*n_dynamics levels against a cutoff enlarged by margin.

    n_dynamics is the highest photon number the dynamics is trusted to
    populate; the steady-state and trajectory engines in this package stay
    well below 10 photons at the intended parameter regimes.  Energy shifts
    are reported relative to the spectral span, element shifts relative to
    the largest retained |X| element.  Parity-gauge freedom is removed by
    comparing magnitudes.
    """
    p_big = p.with_(n_max=p.n_max + margin)
    basis_big = dressed_basis(p_big)
    n_levels = min(2 * n_dynamics, basis.dim)

    span = basis.energies[-1] - basis.energies[0]
    energy_shift = float(np.max(np.abs(
        basis.energies[:n_levels] - basis_big.energies[:n_levels])) / span)

    a_small, _ = build_cavity_ops(p.n_max)
    a_big, _ = build_cavity_ops(p_big.n_max)
    x_small = np.abs(basis.states.conj().T @ (a_small + a_small.conj().T) @ basis.states)
    x_big = np.abs(basis_big.states.conj().T @ (a_big + a_big.conj().T) @ basis_big.states)
    block_small = x_small[:n_levels, :n_levels]
    block_big = x_big[:n_levels, :n_levels]
    scale = max(np.max(block_small), 1e-300)
    element_shift = float(np.max(np.abs(block_small - block_big)) / scale)

    return TruncationReport(n_levels=n_levels, energy_shift=energy_shift,
                            element_shift=element_shift, tolerance=tolerance)
