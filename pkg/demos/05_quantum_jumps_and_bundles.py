"""
Quantum-jump trajectories and bundle statistics
===============================================

Unraveling the master equation into single stochastic realizations turns
the steady-state photon flux into discrete detector clicks.  At the
two-photon resonance the cavity clicks arrive in tight pairs; grouping them
with a window of 10/kappa and counting cluster sizes gives the bundle
purity.
"""

import numpy as np

import bundlesim as bs

p = bs.SystemParams(kappa=0.02, omega_L=bs.find_resonance(bs.SystemParams(), j=2))
engine = bs.TrajectoryEngine(p)

res = engine.run(seed=7, t_end=2e4)
print(f"one trajectory, t_end = 2e4, kappa = {p.kappa}:")
for t, ch in res.clicks[:14]:
    print(f"  t = {t:9.1f}   {ch}")
if len(res.clicks) > 14:
    print(f"  ... {len(res.clicks) - 14} more")

window = 10.0 / p.kappa
stats = bs.classify_bundles(res.clicks, window)
print(f"\ncluster sizes with window {window:.0f}: {stats.histogram}")

# a modest ensemble sharpens the estimate
trajs = bs.run_ensemble(engine, 11, n_traj=24, t_end=2e4)
merged = bs.merge_bundle_stats(
    [bs.classify_bundles(tr.clicks, window) for tr in trajs])
print(f"ensemble of 24: {merged.p_tot} emission events, "
      f"sizes {dict(sorted(merged.histogram.items()))}")
print(f"two-photon purity Pi_2 = {merged.purity(2):.3f} "
      f"+- {merged.purity_stderr(2):.3f}")
