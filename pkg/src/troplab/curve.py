"""Weighted rational graphs in R^n: balancing, monotone paths, hyperplane sections.

A :class:`BalancedGraph` is a finite one-dimensional polyhedral complex.
Bounded edges are segments between two vertices, unbounded edges are rays
from one vertex. Every edge carries a primitive integer direction and a
positive integer weight.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DimensionMismatch,
    MalformedGraph,
    NoAscendingEdge,
    NotTransverseError,
    NotWeaklyBalanced,
    PointNotOnGraph,
    TooFewTerms,
    ZeroVector,
)
from .geom_core import (
    Ray,
    Segment,
    dot,
    primitive_from_rational,
    primitive_vector,
    rational_point,
    relint_contains_origin,
    solve_particular,
    to_fraction,
)
from .hypersurface import TropicalPolynomial, dual_subdivision

__all__ = [
    "Edge",
    "BalancedGraph",
    "graph_diagnostics",
    "BalanceReport",
    "WeakBalanceReport",
    "check_balanced",
    "check_weakly_balanced",
    "MonotonePath",
    "monotone_unbounded_path",
    "verify_path",
    "Hyperplane",
    "Crossing",
    "TransversalSection",
    "NotTransverse",
    "hyperplane_transversal",
    "WitnessPair",
    "convexity_witnesses",
    "curve_from_plane_tropical_polynomial",
    "connected_components",
]

VERTEX_ON_HYPERPLANE = "VertexOnHyperplane"
TANGENT_EDGE = "TangentEdge"


@dataclass(frozen=True)
class Edge:
    kind: str  # "segment" or "ray"
    u: int
    v: Optional[int]
    direction: tuple
    weight: int = 1

    @property
    def is_ray(self) -> bool:
        return self.kind == "ray"


def _sub(p, q):
    return tuple(a - b for a, b in zip(p, q))


def _is_positive_multiple(vec, direction) -> Optional[Fraction]:
    """Return mu > 0 with vec == mu * direction, else None."""
    mu = None
    for x, d in zip(vec, direction):
        if d == 0:
            if x != 0:
                return None
        elif mu is None:
            mu = Fraction(x) / d
    if mu is None or mu <= 0:
        return None
    if any(x != mu * d for x, d in zip(vec, direction)):
        return None
    return mu


def graph_diagnostics(n, vertices, edges) -> list:
    """Human-readable problems with a candidate graph; empty when well formed."""
    problems = []
    nv = len(vertices)
    for i, x in enumerate(vertices):
        if len(x) != n:
            problems.append(f"vertex {i}: expected {n} coordinates")
    if len(set(map(tuple, vertices))) != nv:
        problems.append("duplicate vertex positions")
    degree = [0] * nv
    for k, e in enumerate(edges):
        if e.kind not in ("segment", "ray"):
            problems.append(f"edge {k}: unknown kind {e.kind!r}")
            continue
        if len(e.direction) != n:
            problems.append(f"edge {k}: direction has wrong length")
            continue
        if not isinstance(e.weight, int) or e.weight < 1:
            problems.append(f"edge {k}: weight must be a positive integer")
        if all(x == 0 for x in e.direction):
            problems.append(f"edge {k}: zero direction")
            continue
        if math.gcd(*e.direction) != 1:
            problems.append(f"edge {k}: non-primitive direction {tuple(e.direction)}")
        ends = [e.u] if e.is_ray else [e.u, e.v]
        if any(not isinstance(j, int) or not 0 <= j < nv for j in ends):
            problems.append(f"edge {k}: vertex index out of range")
            continue
        for j in ends:
            degree[j] += 1
        if e.is_ray:
            if e.v is not None:
                problems.append(f"edge {k}: ray must not have a second endpoint")
            continue
        if e.u == e.v:
            problems.append(f"edge {k}: segment endpoints coincide")
            continue
        if len(vertices[e.u]) == n and len(vertices[e.v]) == n:
            if _is_positive_multiple(_sub(vertices[e.v], vertices[e.u]), e.direction) is None:
                problems.append(f"edge {k}: direction not parallel to segment")
    for i, d in enumerate(degree):
        if d == 0:
            problems.append(f"vertex {i}: isolated vertex")
    return problems


class BalancedGraph:
    """Finite weighted rational graph in R^n.

    ``vertices`` are rational points; ``edges`` is a sequence of :class:`Edge`.
    Construction validates the graph and raises :class:`MalformedGraph`.
    """

    def __init__(self, n: int, vertices: Sequence, edges: Sequence[Edge]):
        self.n = int(n)
        self.vertices = tuple(rational_point(x) for x in vertices)
        self.edges = tuple(
            Edge(e.kind, e.u, e.v, tuple(int(x) for x in e.direction), e.weight) for e in edges
        )
        problems = graph_diagnostics(self.n, self.vertices, self.edges)
        if problems:
            raise MalformedGraph("; ".join(problems))
        star = [[] for _ in self.vertices]
        for k, e in enumerate(self.edges):
            star[e.u].append((k, e.direction, 1))
            if not e.is_ray:
                star[e.v].append((k, tuple(-x for x in e.direction), -1))
        self._star = tuple(tuple(s) for s in star)

    def star(self, i: int) -> tuple:
        """Incident edges at vertex ``i`` as ``(edge id, away direction, orientation)``."""
        return self._star[i]

    def pieces(self) -> list:
        out = []
        for e in self.edges:
            if e.is_ray:
                out.append(Ray(self.vertices[e.u], e.direction))
            else:
                out.append(Segment(self.vertices[e.u], self.vertices[e.v]))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, BalancedGraph)
            and self.n == other.n
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __repr__(self):
        return f"BalancedGraph(n={self.n}, vertices={len(self.vertices)}, edges={len(self.edges)})"


@dataclass(frozen=True)
class BalanceReport:
    residuals: tuple
    passed: bool


def check_balanced(G: BalancedGraph) -> BalanceReport:
    """Weighted sum of away-pointing directions at every vertex."""
    residuals = []
    for i in range(len(G.vertices)):
        r = [0] * G.n
        for k, away, _ in G.star(i):
            w = G.edges[k].weight
            r = [a + w * b for a, b in zip(r, away)]
        residuals.append(tuple(r))
    return BalanceReport(tuple(residuals), all(not any(r) for r in residuals))


@dataclass(frozen=True)
class WeakBalanceReport:
    vertex_passed: tuple
    witnesses: tuple  # None where the vertex passes
    passed: bool


def check_weakly_balanced(G: BalancedGraph) -> WeakBalanceReport:
    flags, witnesses = [], []
    for i in range(len(G.vertices)):
        res = relint_contains_origin([away for _, away, _ in G.star(i)])
        flags.append(res.contains)
        witnesses.append(res.witness)
    return WeakBalanceReport(tuple(flags), tuple(witnesses), all(flags))


def _locate(G: BalancedGraph, p):
    """Return ``("vertex", i)`` or ``("edge", k)`` for a point of the graph."""
    for i, x in enumerate(G.vertices):
        if x == p:
            return "vertex", i
    for k, e in enumerate(G.edges):
        mu = _is_positive_multiple(_sub(p, G.vertices[e.u]), e.direction)
        if mu is None:
            continue
        if e.is_ray:
            return "edge", k
        length = _is_positive_multiple(_sub(G.vertices[e.v], G.vertices[e.u]), e.direction)
        if mu < length:
            return "edge", k
    raise PointNotOnGraph(f"{p} is not a point of the graph")


@dataclass(frozen=True)
class MonotonePath:
    """Path along which ``w.x`` strictly increases, ending in an unbounded ray.

    ``steps`` are ``(edge id, orientation)`` pairs where orientation ``+1``
    follows the edge's stored direction. ``vertices`` lists the vertices
    passed through, in order (the start point is included only if it is a
    vertex).
    """

    w: tuple
    start: tuple
    steps: tuple
    vertices: tuple
    ray_direction: tuple


def monotone_unbounded_path(G: BalancedGraph, w, p) -> MonotonePath:
    """Greedy ascent in direction ``w`` from a point ``p`` of the graph.

    At each vertex the outgoing edge maximising ``w.v`` is taken, ties going
    to the lexicographically largest direction. Weak balance is enforced
    locally: reaching a vertex with no ascending edge raises
    :class:`NotWeaklyBalanced`.
    """
    w = tuple(int(x) for x in w)
    if len(w) != G.n:
        raise DimensionMismatch("functional and graph dimensions differ")
    if not any(w):
        raise ZeroVector("w must be nonzero")
    p = rational_point(p)
    if len(p) != G.n:
        raise DimensionMismatch("point and graph dimensions differ")
    kind, idx = _locate(G, p)

    steps, visited = [], []
    if kind == "edge":
        e = G.edges[idx]
        slope = dot(w, e.direction)
        if slope == 0:
            raise NoAscendingEdge(f"w is orthogonal to the edge containing {p}")
        orient = 1 if slope > 0 else -1
        steps.append((idx, orient))
        if e.is_ray and orient > 0:
            return MonotonePath(w, p, tuple(steps), (), e.direction)
        current = e.v if orient > 0 else e.u
    else:
        current = idx

    while True:
        if current in visited:
            raise RuntimeError(f"monotone path revisited vertex {current}")
        visited.append(current)
        options = [(dot(w, away), away, k, o) for k, away, o in G.star(current)]
        up = [opt for opt in options if opt[0] > 0]
        if not up:
            if any(opt[0] < 0 for opt in options):
                raise NotWeaklyBalanced(current, primitive_vector([-x for x in w]))
            raise NoAscendingEdge(f"every edge at vertex {current} is orthogonal to w")
        _, away, k, orient = max(up, key=lambda opt: (opt[0], opt[1]))
        steps.append((k, orient))
        e = G.edges[k]
        if e.is_ray:
            return MonotonePath(w, p, tuple(steps), tuple(visited), away)
        current = e.v if orient > 0 else e.u


def verify_path(G: BalancedGraph, path: MonotonePath) -> list:
    """Check the invariants of a monotone path; returns a list of problems."""
    w = path.w
    if not path.steps:
        return ["path has no steps"]
    problems = []
    start_vertex = next((i for i, x in enumerate(G.vertices) if x == path.start), None)
    ends = [] if start_vertex is None else [start_vertex]
    for idx, (k, o) in enumerate(path.steps):
        e = G.edges[k]
        if dot(w, e.direction) * o <= 0:
            problems.append(f"step along edge {k} does not ascend")
        if ends:
            begin = e.u if o > 0 else e.v
            if begin != ends[-1]:
                problems.append(f"step along edge {k} does not start where the previous one ended")
        if e.is_ray and o > 0:
            if idx != len(path.steps) - 1:
                problems.append("ray taken before the last step")
        elif idx == len(path.steps) - 1:
            problems.append("path does not end along a ray")
        else:
            ends.append(e.v if o > 0 else e.u)
    if tuple(ends) != tuple(path.vertices):
        problems.append("vertex list does not match the steps")
    values = [dot(w, path.start)] + [dot(w, G.vertices[i]) for i in ends if i != start_vertex]
    if any(b <= a for a, b in zip(values, values[1:])):
        problems.append("w-values do not strictly increase")
    if len(ends) > len(G.vertices) or len(set(ends)) != len(ends):
        problems.append("path revisits vertices")
    if dot(w, path.ray_direction) <= 0:
        problems.append("terminal ray does not ascend")
    return problems


@dataclass(frozen=True)
class Hyperplane:
    """``{x : normal.x = offset}``; the positive side is where ``normal.x > offset``."""

    normal: tuple
    offset: Fraction

    def __post_init__(self):
        normal = tuple(int(x) for x in self.normal)
        if not any(normal):
            raise ZeroVector("hyperplane normal must be nonzero")
        if math.gcd(*normal) != 1:
            raise ValueError(f"hyperplane normal {normal} is not primitive")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", to_fraction(self.offset))

    def value(self, x):
        return dot(self.normal, x) - self.offset


@dataclass(frozen=True)
class Crossing:
    point: tuple
    edge: int
    sign: int  # sign of normal.direction for the edge's stored direction


@dataclass(frozen=True)
class TransversalSection:
    hyperplane: Hyperplane
    crossings: tuple


@dataclass(frozen=True)
class NotTransverse:
    reasons: tuple

    @property
    def reason(self) -> str:
        return self.reasons[0]


def hyperplane_transversal(G: BalancedGraph, H: Hyperplane):
    """Exact intersection of the graph with a hyperplane.

    Degenerate positions are returned as :class:`NotTransverse` rather than
    raised; its ``reasons`` list every kind of degeneracy present.
    """
    if len(H.normal) != G.n:
        raise DimensionMismatch("hyperplane and graph dimensions differ")
    vals = [H.value(x) for x in G.vertices]
    reasons = []
    if any(dot(H.normal, e.direction) == 0 and vals[e.u] == 0 for e in G.edges):
        reasons.append(TANGENT_EDGE)
    if any(v == 0 for v in vals):
        reasons.append(VERTEX_ON_HYPERPLANE)
    if reasons:
        return NotTransverse(tuple(reasons))
    crossings = []
    for k, e in enumerate(G.edges):
        slope = dot(H.normal, e.direction)
        if slope == 0:
            continue
        gu = vals[e.u]
        if e.is_ray:
            mu = -gu / slope
            if mu <= 0:
                continue
        else:
            gv = vals[e.v]
            if (gu > 0) == (gv > 0):
                continue
            length = _is_positive_multiple(_sub(G.vertices[e.v], G.vertices[e.u]), e.direction)
            mu = -gu / slope
            assert 0 < mu < length
        point = tuple(a + mu * d for a, d in zip(G.vertices[e.u], e.direction))
        crossings.append(Crossing(point, k, 1 if slope > 0 else -1))
    return TransversalSection(H, tuple(crossings))


@dataclass(frozen=True)
class WitnessPair:
    crossing: Crossing
    ascending: MonotonePath
    descending: MonotonePath


def convexity_witnesses(G: BalancedGraph, H: Hyperplane) -> list:
    """Escape paths in both normal directions from every point of ``G`` on ``H``.

    The ascending and descending paths leave every bounded region on either
    side of ``H``, so the small sphere around each crossing cannot bound a
    chain in the complement of the graph.
    """
    report = check_weakly_balanced(G)
    if not report.passed:
        bad = report.vertex_passed.index(False)
        raise NotWeaklyBalanced(bad, report.witnesses[bad])
    section = hyperplane_transversal(G, H)
    if isinstance(section, NotTransverse):
        raise NotTransverseError(section.reasons)
    w = H.normal
    neg = tuple(-x for x in w)
    return [
        WitnessPair(c, monotone_unbounded_path(G, w, c.point), monotone_unbounded_path(G, neg, c.point))
        for c in section.crossings
    ]


def connected_components(G: BalancedGraph) -> list:
    """Vertex sets of the connected components."""
    parent = list(range(len(G.vertices)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for e in G.edges:
        if not e.is_ray:
            parent[find(e.u)] = find(e.v)
    groups = {}
    for i in range(len(G.vertices)):
        groups.setdefault(find(i), []).append(i)
    return [tuple(g) for g in groups.values()]


def _lattice_length(a, b) -> int:
    return math.gcd(*(x - y for x, y in zip(a, b)))


def curve_from_plane_tropical_polynomial(T: TropicalPolynomial) -> BalancedGraph:
    """The tropical plane curve of ``T`` with lattice-length weights.

    Vertices are dual to the two-dimensional cells of the regular subdivision;
    interior edges of the subdivision give segments and boundary edges give
    rays. When the support is collinear, each dual line is split at its point
    closest to the origin.
    """
    if T.n != 2:
        raise DimensionMismatch("plane curves need n = 2")
    if len(T) < 2:
        raise TooFewTerms("a plane curve needs at least two terms")
    cells = dual_subdivision(T)
    edges_1 = [c for c in cells if c.dim == 1]
    cells_2 = [c for c in cells if c.dim == 2]
    vertices, edges = [], []

    if not cells_2:
        for cell in edges_1:
            a, b = cell.exponents[0], cell.exponents[-1]
            ba = _sub(b, a)
            shift = (T.terms[a] - T.terms[b]) / dot(ba, ba)
            q = tuple(shift * x for x in ba)
            perp = primitive_vector((-ba[1], ba[0]))
            weight = _lattice_length(a, b)
            i = len(vertices)
            vertices.append(q)
            edges.append(Edge("ray", i, None, perp, weight))
            edges.append(Edge("ray", i, None, tuple(-x for x in perp), weight))
        return BalancedGraph(2, vertices, edges)

    for cell in cells_2:
        rows = [[1, a[0], a[1]] for a in cell.exponents]
        rhs = [-T.terms[a] for a in cell.exponents]
        # -h + w.a = -c_a  <=>  c_a + w.a = h
        sol = solve_particular(rows, rhs)
        vertices.append((sol[1], sol[2]))

    for cell in edges_1:
        a, b = cell.exponents[0], cell.exponents[-1]
        ba = _sub(b, a)
        weight = _lattice_length(a, b)
        owners = [i for i, big in enumerate(cells_2) if set(cell.exponents) <= set(big.exponents)]
        if len(owners) == 2:
            i, j = owners
            direction = primitive_from_rational(_sub(vertices[j], vertices[i]))
            edges.append(Edge("segment", i, j, direction, weight))
        elif len(owners) == 1:
            i = owners[0]
            perp = primitive_vector((-ba[1], ba[0]))
            other = next(s for s in cells_2[i].exponents if s not in cell.exponents)
            if dot(perp, _sub(other, a)) < 0:
                perp = tuple(-x for x in perp)
            edges.append(Edge("ray", i, None, perp, weight))
        else:
            raise RuntimeError(f"subdivision edge {cell.exponents} lies in {len(owners)} maximal cells")
    return BalancedGraph(2, vertices, edges)
