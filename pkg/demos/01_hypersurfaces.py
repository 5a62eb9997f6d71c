"""
Tropical hypersurfaces by hand
==============================

A min-plus polynomial, its tie locus, and the regular subdivision of its
support. Everything below is exact rational arithmetic.
"""

# %%
from fractions import Fraction

from troplab import (
    TropicalPolynomial,
    argmin_support,
    check_zero_convexity_along_line,
    dual_subdivision,
    evaluate,
    line_section,
    linearity_region,
)

# A univariate quadratic: min(0, w, 1 + 2w). Breakpoints sit at w = -1 and w = 0.
quad = TropicalPolynomial({0: 0, 1: 0, 2: 1})
for w in (-2, -1, Fraction(-1, 2), 0, Fraction(1, 2)):
    print(f"w = {str(w):>5}  value = {str(evaluate(quad, w)):>3}  argmin = {sorted(argmin_support(quad, w))}")

# %%
# Domains of linearity are polyhedra; the middle monomial owns [-1, 0].
region = linearity_region(quad, 1)
print("halfspaces (normal, offset):", region.halfspaces, "empty:", region.empty)

# Raise the middle valuation and its domain disappears.
print("with c_1 = 5:", linearity_region(TropicalPolynomial({0: 0, 1: 5, 2: 1}), 1).empty)

# %%
# The plane conic with the (1,1) term lifted: its lower hull splits the unit
# square into two triangles along the anti-diagonal.
conic = TropicalPolynomial({(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): 1})
for cell in dual_subdivision(conic):
    if cell.dim == 2:
        print("maximal cell:", cell.exponents)

# %%
# Restricting to a line gives a one-dimensional envelope. Every monomial labels
# at most one interval, which is the 0-convexity of the complement seen on a line.
sec = line_section(conic, (0, Fraction(1, 3)), (1, 2))
print("breakpoints:", [str(b) for b in sec.breakpoints])
print("labels:     ", sec.labels)
print("0-convex along this line:", check_zero_convexity_along_line(conic, (0, Fraction(1, 3)), (1, 2)).passed)
