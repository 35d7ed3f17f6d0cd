"""
Parity chains of the undriven qubit-cavity Hamiltonian
======================================================

At mixing angle theta = pi/2 the Hamiltonian commutes with the joint parity
(-1)^(n+s), so every eigenstate carries a sharp +-1 label and the Hilbert
space splits into two decoupled chains.  Tilting the angle breaks the
symmetry and the labels blur.
"""

import numpy as np

import bundlesim as bs

for theta in (np.pi / 2, np.pi / 6):
    p = bs.SystemParams(theta=theta)
    h = bs.build_rabi_hamiltonian(p)
    pi_op = bs.build_parity_operator(p.n_max)
    comm = np.max(np.abs(pi_op @ h - h @ pi_op)) / np.max(np.abs(h))
    basis = bs.dressed_basis(p)
    print(f"theta = {theta:.4f}:  |[Pi, H]| / |H| = {comm:.2e}")
    print("  lowest levels (energy, <Pi>):")
    for k in range(6):
        print(f"    {k}:  {basis.energies[k]:+9.5f}   {basis.parities[k]:+.6f}")

# the emission operators only connect states downhill in energy;
# at pi/2 they also flip parity, which is what protects the bundles
p = bs.SystemParams()
basis, jumps = bs.jump_operators(p)
x_elems = basis.states.conj().T @ jumps.X @ basis.states
m, n = np.nonzero(np.abs(x_elems) > 1e-10)
same_parity = np.sum(basis.parities[m] * basis.parities[n] > 0)
print(f"\ncavity channel: {len(m)} nonzero matrix elements, "
      f"{same_parity} within one parity chain")
