"""
Precision-recall under extreme class imbalance
==============================================

A synthetic surrogate for a fraud-detection task: 20000 rows, 0.5% positives.
Both optimizers get the same split, learning rate and epoch budget, and are
compared by average precision on the held-out split.

With exact full-batch gradients the two end up with nearly the same weight
direction, so expect PR-AUCs that agree to about three decimals.
"""

from weylopt import (
    ClassicalGD,
    LogisticModel,
    WeylConfig,
    WeylOptimizer,
    pr_curve,
    predict_proba,
    standardize,
    stratified_split,
    synth_imbalanced,
    train,
)

ds = synth_imbalanced(20000, 10, 0.005, separation=2.0, seed=1)
tr, te = stratified_split(ds, 0.2, seed=1)
_, (tr, te) = standardize(tr, [te])
print(f"train {tr.n} rows ({int(tr.y.sum())} positive), test {te.n} rows ({int(te.y.sum())} positive)")

curves = {}
for name, opt in [
    ("classical", ClassicalGD(0.1)),
    ("weyl", WeylOptimizer(WeylConfig(alpha=0.6, window=64, learning_rate=0.1))),
]:
    model, _ = train(LogisticModel.zeros(tr.d), tr, opt, 500)
    curves[name] = pr_curve(predict_proba(model, te.X), te.y)
    print(f"{name:9s} PR-AUC {curves[name].auc:.4f}")
print(f"prevalence baseline {te.prevalence:.4f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots()
    for name, c in curves.items():
        ax.step(c.recall, c.precision, where="post", label=f"{name} (AP={c.auc:.3f})")
    ax.set_xlabel("recall")
    ax.set_ylabel("precision")
    ax.legend()
    fig.savefig("imbalance_pr.png", dpi=120)
    print("wrote imbalance_pr.png")
