"""
Scaled amoebas approaching their tropical limit
===============================================

Sample roots of f_t = t + z1 + z2, rescale by 1/log t, and measure how far
the cloud sits from the tropical line with vertex (1, 1). Set
``TROPLAB_THREADS=0`` to use every core.
"""

# %%
import math
from fractions import Fraction

import numpy as np

from troplab import (
    Hyperplane,
    MonomialFamily,
    compact_avoidance_check,
    convergence_table,
    line_section_gap,
    sample_amoeba,
)

# Univariate warm-up: 1 + z + t z^2 has roots near -1 and -1/t.
quad = MonomialFamily([(0, 1, 0), (1, 1, 0), (2, 1, 1)])
for t in (1e-2, 1e-4, 1e-6):
    print(f"t = {t:.0e}  scaled roots = {np.round(sample_amoeba(quad, t).points[:, 0], 8)}")

# %%
family = MonomialFamily([((0, 0), 1, 1), ((1, 0), 1, 0), ((0, 1), 1, 0)])
window = (-2, 2, -2, 2)
report = convergence_table(family, [1e-2, 1e-4, 1e-6], window, grid=(256, 64), margin=0.25)
print(f"{'t':>8} {'points':>7} {'target->sample':>15} {'sample->target':>15}")
for row in report.rows:
    print(f"{row.t:8.0e} {row.n_points:7d} {row.gap_t2s:15.5f} {row.gap_s2t:15.5f}")

# The cloud collapses onto the curve (second column). The first column stays
# near half a grid diagonal: the curve already lies inside every scaled amoeba,
# so what is left is the spacing of the fiber grid.
h = (window[1] - window[0] + 0.5) / 255
print(f"grid floor h*sqrt(2)/2 = {h * math.sqrt(2) / 2:.5f}")

# %%
# A ball that misses the tropical curve is eventually missed by the amoebas too.
avoid = compact_avoidance_check(family, (0, 1), Fraction(2, 5), [1e-4, 1e-5, 1e-6], window)
print("clearances:", [round(c, 4) for c in avoid.clearances])

# %%
# Near the line w2 = 3/4 the cloud passes close to the exact crossing (3/4, 3/4).
for gap in line_section_gap(family, 1e-6, Hyperplane((0, 1), Fraction(3, 4)), 0.05, window):
    print("crossing", tuple(map(str, gap.point)), "nearest in-tube point at distance", round(gap.distance, 4))
