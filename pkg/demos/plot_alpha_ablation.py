"""
Sensitivity to the fractional order
===================================

Runs the harness ablation over alpha on the imbalanced synthetic task and
prints the median PR-AUC per alpha next to the classical baseline. The same
sweep is available from the command line as ``python -m weylopt ablation``.

With exact full-batch gradients every alpha converges to practically the same
weight direction, so the medians come out flat. Set ``"grad_noise"`` in the
config to study the noisy regime instead.
"""

import tempfile

from weylopt.harness import ExperimentConfig, cmd_ablation

cfg = ExperimentConfig.from_dict({"seeds": [1, 2, 3]})

with tempfile.TemporaryDirectory() as out:
    res = cmd_ablation(cfg, out)

for alpha, med in sorted(res["median"].items()):
    print(f"alpha={alpha:<5g} median PR-AUC {med:.4f}")
print(f"classical       median PR-AUC {res['classical_median']:.4f}")
