"""
How many hops until the far side of the circle lights up
========================================================

For two points a half-circle apart, the expected number of connecting
chains with k intermediaries is zero until the window is wide enough
that k+1 hops can span the distance.  Normalizing by the mean degree
gives curves that all terminate at the same value p/pi at full width,
with onset thresholds that move left as k grows.
"""

import math

import numpy as np

from ringnet import antipodal_chain_count_uniform

p = 0.1
orders = [1, 2, 4, 6, 10, 20]
widths = np.linspace(0.05, math.pi, 160)

curves = {}
for k in orders:
    # the normalization divides out the mean degree, so the value passed
    # here only has to be consistent across the sweep
    curves[k] = np.array([
        antipodal_chain_count_uniform(p, w, 2.0 * p * w, k).normalized.value
        for w in widths
    ])

terminal = p / math.pi
print(f"terminal value p/pi = {terminal:.6f}")
print("\n  k   onset (reach)   half-rise   value at pi")
for k in orders:
    onset = math.pi / (k + 1)  # chains exist once (k+1) * width > pi
    half = widths[np.argmax(curves[k] >= 0.5 * terminal)]
    print(f"{k:>3}   {onset:11.4f}   {half:9.4f}   {curves[k][-1]:.6f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for k in orders:
        ax.plot(widths, curves[k], lw=1.2, label=f"k = {k}")
    ax.axhline(terminal, color="gray", ls=":", lw=1)
    ax.set_xlabel("window half-width (radians)")
    ax.set_ylabel("normalized chain count at gap pi")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig("separation_thresholds.png", dpi=150)
    print("\nwrote separation_thresholds.png")
except ImportError:
    print("\nmatplotlib not installed, skipping the figure")
