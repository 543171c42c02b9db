"""
Memory kernels for different fractional orders
==============================================

The Weyl optimizer replaces the current gradient with a weighted sum of the
last ``L`` gradients. This script prints and plots those weights for a few
fractional orders and time warps.
"""

import numpy as np

from weylopt import Constant, Identity, Logarithmic, Rational, kernel_coefficients

L = 64

# Small alpha spreads weight over the distant past; alpha -> 1 with the
# identity warp and no decay is a flat average over the window.
for alpha in (0.1, 0.4, 0.6, 0.9, 1.0):
    k = kernel_coefficients(alpha, Identity(), Constant(), L)
    print(f"identity   alpha={alpha:<4} age0={k.coeffs[0]:.4f} age10={k.coeffs[10]:.4f} age63={k.coeffs[63]:.5f}")

# The logarithmic warp compresses old ages, so most of the mass sits on the
# last few steps. The rational weight decays it further.
for weight in (Constant(), Rational(0.1)):
    k = kernel_coefficients(0.6, Logarithmic(), weight, L)
    half = int(np.searchsorted(np.cumsum(k.coeffs), 0.5)) + 1
    print(f"log + {weight}: half the mass within the newest {half} gradients")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    ages = np.arange(L)
    fig, ax = plt.subplots()
    for alpha in (0.2, 0.4, 0.6, 0.8, 0.99):
        ax.semilogy(ages, kernel_coefficients(alpha, Logarithmic(), Rational(0.1), L).coeffs, label=f"alpha={alpha}")
    ax.set_xlabel("memory age (steps)")
    ax.set_ylabel("normalized weight")
    ax.legend()
    fig.savefig("kernel_coefficients.png", dpi=120)
    print("wrote kernel_coefficients.png")
