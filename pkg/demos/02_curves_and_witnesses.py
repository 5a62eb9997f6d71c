"""
Balanced curves, monotone paths and convexity witnesses
=======================================================

Build the tropical curve of a plane polynomial, confirm it is balanced,
then cut it with a line and extract the escape paths on both sides.
"""

# %%
from fractions import Fraction

from troplab import (
    Hyperplane,
    check_balanced,
    check_weakly_balanced,
    convexity_witnesses,
    curve_from_plane_tropical_polynomial,
    hyperplane_transversal,
    monotone_unbounded_path,
    TropicalPolynomial,
)

conic = TropicalPolynomial({(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): 1})
G = curve_from_plane_tropical_polynomial(conic)
print("vertices:", [tuple(map(str, v)) for v in G.vertices])
for k, e in enumerate(G.edges):
    print(f"  edge {k}: {e.kind:7s} from vertex {e.u}  direction {e.direction}  weight {e.weight}")

# %%
# Balancing is the sum of weighted outgoing directions; weak balancing only asks
# that the origin sit in the relative interior of their convex hull.
print("balanced:", check_balanced(G).passed, " weakly balanced:", check_weakly_balanced(G).passed)

# %%
# From the lower vertex, walk upward in the w1 direction.
path = monotone_unbounded_path(G, (1, 0), (-1, -1))
print("vertices visited:", [tuple(map(str, G.vertices[i])) for i in path.vertices], "then ray", path.ray_direction)

# %%
# A horizontal line w2 = 1/2 meets the curve once. From that point one path
# escapes upward and one downward, so no bounded region sits across the line.
H = Hyperplane((0, 1), Fraction(1, 2))
print("crossings:", [tuple(map(str, c.point)) for c in hyperplane_transversal(G, H).crossings])
for pair in convexity_witnesses(G, H):
    up, down = pair.ascending, pair.descending
    print("  ascending ray:", up.ray_direction)
    print("  descending via", [tuple(map(str, G.vertices[i])) for i in down.vertices], "then ray", down.ray_direction)

# %%
# Lines through a vertex are rejected rather than perturbed.
print(hyperplane_transversal(G, Hyperplane((0, 1), 0)))
