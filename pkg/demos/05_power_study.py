"""Run a small Monte Carlo power study and check it against theory.

Experiments are declarative configs; replicates draw from per-replicate
substreams, so the table is identical no matter how many workers run it.
"""

import numpy as np

from rotsym import ExperimentConfig, local_alternative_validation, run_experiment

cfg = ExperimentConfig(
    scenario="te_grid",
    p=3,
    n=100,
    reps=500,
    ell_grid=(0, 1, 2, 3),
    tests=("s-loc", "s-sc", "u-sc"),
    base_seed=42,
    workers=2,
)
table = run_experiment(cfg)
print("rejection frequencies against scatter-type alternatives")
print(f"  {'ell':>4s} " + " ".join(f"{t:>7s}" for t in cfg.tests))
for ell in cfg.ell_grid:
    print(f"  {ell:4d} " + " ".join(f"{table.freq(t, ell):7.3f}" for t in cfg.tests))
print("the scatter tests climb with severity; the location test stays flat")

rec = local_alternative_validation(
    p=3, n=400, test="s-sc", alternative_kind="te",
    strength=1.5 * np.diag([1.0, -1.0]), reps=400, base_seed=7,
)
print("\nlocal alternative check for s-sc:")
print(f"  empirical power {rec['empirical']:.3f} vs predicted {rec['predicted']:.3f}"
      f" ({rec['discrepancy_se']:.2f} s.e. apart)")
