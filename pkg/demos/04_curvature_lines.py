"""
Lines of curvature as trajectories
==================================

Through the Gauss map the curvature lines become the curves where
S(z) dz^2 is real. For z^2 on a sector these are circles and rays.
"""

import numpy as np

from horosurf import maps
from horosurf.weingarten import TrajectorySeed, curvature_line_trace

f = maps.power(2.0)
plus = curvature_line_trace(f, TrajectorySeed(2.0 + 0j, "plus", 1e-3, 1000))
minus = curvature_line_trace(f, TrajectorySeed(1.0 + 0.3j, "minus", 1e-3, 1000))

print("plus: |z| spread", np.ptp(np.abs(plus.points)), "stop:", plus.stop)
print("minus: arg spread", np.ptp(np.angle(minus.points)), "stop:", minus.stop)
print("worst normalized Im(S dz^2):", max(np.abs(plus.residuals).max(), np.abs(minus.residuals).max()))

# a long trace runs into the sector wall and stops there
edge = curvature_line_trace(f, TrajectorySeed(0.9 + 0.3j, "plus", 1e-2, 10_000))
print("long trace stops at:", edge.stop, "after", len(edge.points) - 1, "steps")
