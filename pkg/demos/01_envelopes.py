"""
Surfaces as envelopes of horospheres
====================================

A function rho on the sphere picks one horosphere per boundary point; the
envelope of that family is a surface in the ball. Constant rho gives a
metric sphere, -log cos gives a totally geodesic plane.
"""

import numpy as np

from horosurf import constant, geodesic_plane, horosphere_field, surface_jet

theta = np.array([0.3, 0.4, -np.sqrt(0.75)])

# constant rho = c: a sphere of hyperbolic radius c about the origin
for c in (0.5, 1.0, 2.0):
    s = surface_jet(constant(c), theta)
    print(f"c = {c}: |R| = {np.linalg.norm(s.position.coords):.12f} (tanh(c/2) = {np.tanh(c / 2):.12f}),"
          f" k = {s.k1:.6f} (-coth c = {-1 / np.tanh(c):.6f})")

# the plane: both curvatures vanish and K = -1
s = surface_jet(geodesic_plane(), theta)
print("plane:", s.k1, s.k2, s.K, "point", s.position.coords.round(6))

# a horosphere regenerates itself, k = -1 with this normal
s = surface_jet(horosphere_field([0, 0, 1], 0.2), theta)
print("horosphere:", s.k1, s.k2, "K_inf =", s.k_inf)
