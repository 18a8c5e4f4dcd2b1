"""
Clustering plateau of the sharp-window ring network
===================================================

Sweeps the window half-width and tracks the mean clustering coefficient
divided by the link probability p.  The ratio sits on a flat plateau of
3/4 for narrow and moderate windows, then bends up and reaches exactly 1
when the window covers the whole circle.

Run:  python3 demos/clustering_plateau.py
Writes clustering_plateau.png and prints a small table.
"""

import math

import numpy as np

from ringnet import CircleModel, UniformWindow, clustering_by_quadrature, clustering_uniform

p = 0.1
widths = np.linspace(0.05, math.pi, 200)

# closed-form series route, vectorized over the sweep
ratios = np.array([clustering_uniform(p, w).value / p for w in widths])

print("half-width   <C>/p")
for w in (0.1, 0.5, 1.0, 2.0, 2.5, 3.0, math.pi):
    r = clustering_uniform(p, w).value / p
    print(f"  {w:8.4f}   {r:.6f}")

# the plateau is exact up to 2*pi/3, where the third convolution harmonic
# first reaches around the circle
knee = 2.0 * math.pi / 3.0
flat = ratios[widths <= knee]
print(f"\nplateau region max deviation from 3/4: {np.max(np.abs(flat - 0.75)):.2e}")
print(f"value at half-width pi: {ratios[-1]:.12f}")

# spot check one point against direct numerical integration
w = 1.3
quad = clustering_by_quadrature(CircleModel(20.0, UniformWindow(p, w)))
series = clustering_uniform(p, w).value
print(f"cross-check at {w}: series {series:.10f}, quadrature {quad:.10f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(widths, ratios, lw=1.5)
    ax.axhline(0.75, color="gray", ls=":", lw=1)
    ax.axvline(knee, color="gray", ls=":", lw=1)
    ax.set_xlabel("window half-width (radians)")
    ax.set_ylabel("clustering / p")
    ax.set_title("Clustering ratio across window widths")
    fig.tight_layout()
    fig.savefig("clustering_plateau.png", dpi=150)
    print("wrote clustering_plateau.png")
except ImportError:
    print("matplotlib not installed, skipping the figure")
