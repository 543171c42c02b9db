"""
Smoother loss curves under gradient noise
=========================================

A 569 x 30 synthetic stand-in for a small diagnostic dataset, trained with
noisy full-batch gradients (emulating mini-batch sampling). The Weyl
optimizer averages the noise over its memory window, so its loss curve has
less total variation than plain gradient descent at the same learning rate.
"""

from weylopt import (
    ClassicalGD,
    LogisticModel,
    WeylConfig,
    WeylOptimizer,
    standardize,
    stratified_split,
    synth_imbalanced,
    total_variation,
    train,
)

ds = synth_imbalanced(569, 30, 212 / 569, separation=3.0, seed=1)
tr, te = stratified_split(ds, 0.2, seed=1)
_, (tr, te) = standardize(tr, [te])

traces = {}
for name, opt in [
    ("classical", ClassicalGD(0.1)),
    ("weyl", WeylOptimizer(WeylConfig(alpha=0.6, window=64, learning_rate=0.1))),
]:
    _, trace = train(LogisticModel.zeros(30), tr, opt, 500, val=te, grad_noise=0.1, noise_seed=1)
    traces[name] = trace
    print(f"{name:9s} final train loss {trace.train[-1]:.4f}  test loss {trace.val[-1]:.4f}  "
          f"TV {total_variation(trace.train):.4f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots()
    for name, trace in traces.items():
        ax.plot(trace.steps, trace.train, label=name, lw=0.8)
    ax.set_xlabel("epoch")
    ax.set_ylabel("training loss")
    ax.set_ylim(top=0.4)
    ax.legend()
    fig.savefig("smoothing.png", dpi=120)
    print("wrote smoothing.png")
