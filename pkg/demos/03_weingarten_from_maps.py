"""
Weingarten surfaces from conformal maps
=======================================

Pulling the Poincare metric back by a conformal map onto the disk gives a
rho whose envelope has K_inf = -1. Its curvatures depend only on
s = |S_f|/mu, and every offset satisfies (1 - a)K = a(2 - H), a = -e^{-2t}.
"""

import numpy as np

from horosurf import eval_jet, maps, shape_operator
from horosurf.hyperbolic import STANDARD_CHART
from horosurf.weingarten import ratio, regularity_classify, rho_of_map, weingarten_curvatures

f = maps.quadratic_inverse(0.45)
field = rho_of_map(f)
z = 0.6 * np.exp(0.7j)
w = z + 0.45 * z * z  # a point of the domain p(D)

r = ratio(f, w)
print(f"s = {r.s:.6f}")
for t in (0.0, 0.5):
    sj = shape_operator(eval_jet(field + t, STANDARD_CHART.from_chart(w)))
    kp, km, K = weingarten_curvatures(r.s, t)
    a = -np.exp(-2 * t)
    print(f"t = {t}: surface {sorted((sj.k1, sj.k2))}, from s {sorted((kp, km))},"
          f" relation residual {(1 - a) * sj.K - a * (2 - sj.H):.1e}")

# s is small near the boundary (mu blows up there), so sample the whole disk
rad, ang = np.meshgrid(np.linspace(0, 0.98, 50), 2 * np.pi * np.arange(60) / 60)
zs = (rad * np.exp(1j * ang)).ravel()
for name, fm, pts in [("identity", maps.identity(), zs),
                      ("quadratic_inverse", f, zs + 0.45 * zs * zs),
                      ("koebe_inverse", maps.koebe_inverse(), zs / (1 - zs) ** 2)]:
    c = regularity_classify(fm, pts, -1.0)
    print(f"{name:18s} class {c.label}  sup s = {c.sup_s:.4f}  critical |alpha| = {c.critical_alpha:.4f}")
