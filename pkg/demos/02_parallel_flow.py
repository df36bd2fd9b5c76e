"""
Parallel flow and focal times
=============================

Adding t to rho moves the surface a distance t along its normal. The
curvatures follow k(t) = (k0 ch t - sh t)/(ch t - k0 sh t) and blow up at
coth t = k0.
"""

import numpy as np

from horosurf import RhoJet, chart_at, shape_operator
from horosurf.flow import bonnet_partner, convexity_class, decompose_flow, focal_bracket, focal_times

# an arbitrary jet, away from any focal point
jet = RhoJet(0.2, 0.1, 0.0, 1.4, 0.3, -0.6, frame=chart_at([1, 0, 0]))
s0 = shape_operator(jet)
print("k1, k2 =", s0.k1, s0.k2, "->", convexity_class(s0.k1, s0.k2).label)

state = decompose_flow(s0.g, s0.Pi_low)
for t in (-0.5, 0.25, 0.5):
    g, Pi = state.evaluate(t)
    direct = shape_operator(jet.shifted(t))
    print(f"t = {t:+.2f}: |g - g_direct| = {np.abs(g - direct.g).max():.1e}, K = {direct.K:.6f}")

# focal times from the curvatures, then bracketed on the signed area element
for t_star, mult in focal_times(s0.k1, s0.k2):
    root = focal_bracket(state, t_star - 0.1, t_star + 0.1)
    print(f"focal at t = {t_star:.15f} (x{mult}), bracketed root {root:.15f}")

# the parallel surface with constant K = 1/sh^2 t
t = bonnet_partner(2.5)
print("H0 = 2.5 -> t =", t, " (1/2 ln 3 =", 0.5 * np.log(3), ")")
