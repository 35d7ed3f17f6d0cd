"""Simulator for parity-protected multiphoton bundle emission from a driven,
ultrastrongly coupled qubit-cavity system.

Core pipeline: build the extended Rabi Hamiltonian on the truncated joint
Hilbert space (operators), diagonalize it and form the energy-lowering jump
operators (dressed), evolve closed or open dynamics (evolution), locate
resonances and effective rates (rates), evaluate photon correlations
(correlations), and unravel the master equation into clicking trajectories
with bundle statistics (trajectories).  The cli module exposes all of it as
`bundlesim <experiment> --config ... --out ...`.
"""

__version__ = "0.1.0"

from .correlations import (CorrelationCurve, DenominatorUnderflow,
                           SpectrumResult, excitation_spectrum,
                           g2_bundle_tau, g2_photon_tau, g_n_equal_time)
from .config import ConfigError, RunConfig, parse_config
from .csvio import read_csv, write_csv
from .dressed import (DressedBasis, JumpOperators, TruncationReport,
                      build_jump_operators, check_truncation, diagonalize,
                      dressed_basis, jump_operators)
from .evolution import (EvolutionResult, SteadyStateResult, lindblad_evolve,
                        lindblad_rhs, periodic_steady_state,
                        schrodinger_evolve)
from .operators import (basis_index, basis_labels, build_cavity_ops,
                        build_full_hamiltonian, build_parity_operator,
                        build_qubit_ops, build_rabi_hamiltonian, state_ket)
from .params import SystemParams
from .rates import (ResonanceFit, find_resonance, omega_eff_analytic,
                    omega_eff_numeric)
from .trajectories import (BundleStats, ClickRecord, PuritySweepResult,
                           TrajectoryEngine, TrajectoryResult,
                           bundle_g2_estimator, classify_bundles, mcwf_run,
                           merge_bundle_stats, purity_sweep, run_ensemble)

__all__ = [
    "__version__",
    "SystemParams",
    "basis_index", "basis_labels", "state_ket",
    "build_cavity_ops", "build_qubit_ops", "build_rabi_hamiltonian",
    "build_full_hamiltonian", "build_parity_operator",
    "DressedBasis", "JumpOperators", "TruncationReport",
    "diagonalize", "dressed_basis", "build_jump_operators", "jump_operators",
    "check_truncation",
    "EvolutionResult", "SteadyStateResult",
    "schrodinger_evolve", "lindblad_rhs", "lindblad_evolve",
    "periodic_steady_state",
    "ResonanceFit", "omega_eff_analytic", "find_resonance", "omega_eff_numeric",
    "SpectrumResult", "CorrelationCurve", "DenominatorUnderflow",
    "g_n_equal_time", "excitation_spectrum", "g2_bundle_tau", "g2_photon_tau",
    "ClickRecord", "TrajectoryResult", "TrajectoryEngine", "BundleStats",
    "PuritySweepResult", "mcwf_run", "run_ensemble", "classify_bundles",
    "merge_bundle_stats", "purity_sweep", "bundle_g2_estimator",
    "ConfigError", "RunConfig", "parse_config",
    "read_csv", "write_csv",
]
