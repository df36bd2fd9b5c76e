"""
Schwarzian and density bounds
=============================

Univalent maps obey |S| <= 6/delta^2; maps onto the disk obey the Kraus
bound |S| <= (3/2) mu, which the Koebe inverse attains at 0. For an annulus
the covering map is only locally univalent; the boundary bound still holds.
"""

import numpy as np

from horosurf import maps
from horosurf.weingarten import hyperbolic_density_bounds, ratio, univalence_bounds

r = ratio(maps.koebe_inverse(), 0.0)
print(f"Koebe inverse at 0: |S| = {abs(r.S)}, 1.5 mu = {1.5 * r.mu}")

rng = np.random.default_rng(3)
z = 0.97 * np.sqrt(rng.uniform(0, 1, 300)) * np.exp(2j * np.pi * rng.uniform(0, 1, 300))
rep = univalence_bounds(maps.quadratic_inverse(0.45), z + 0.45 * z * z)
for name, c in rep.checks.items():
    print(f"{name:8s} samples {c.samples}  worst margin {c.worst_margin:.4f}  violations {len(c.violations)}")

w = np.exp(rng.uniform(0.05, np.log(3) - 0.05, 200) + 2j * np.pi * rng.uniform(0, 1, 200))
rep = univalence_bounds(maps.annulus(1.0, 3.0), w)
print("annulus:", {k: round(c.worst_margin, 4) for k, c in rep.checks.items()})

# lambda delta stays in [1/2, 2] on simply connected domains
vals = [hyperbolic_density_bounds(maps.koebe_inverse(), v) for v in (0.0, 1.0, -0.2, 3j)]
print("lambda*delta:", [round(v["lam"] * v["delta"], 4) for v in vals])
