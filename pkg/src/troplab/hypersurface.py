"""Tropical hypersurfaces of min-plus polynomials.

A :class:`TropicalPolynomial` is a finite support ``A`` in Z^n with a rational
valuation ``c_a`` per exponent. It defines the concave piecewise-linear
function ``w -> min(c_a + w.a)``; the hypersurface is where that minimum is
attained at least twice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Optional

from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    LineInsideHypersurface,
    TooFewTerms,
    TooManyTerms,
    UnknownExponent,
    ZeroDirection,
)
from .geom_core import affine_frame, dot, faces, rank, rational_point, solve_particular, to_fraction
from .lp import linprog_exact

__all__ = [
    "TropicalPolynomial",
    "LinearityRegion",
    "Cell",
    "LineSection",
    "ZeroConvexityReport",
    "evaluate",
    "argmin_support",
    "contains",
    "linearity_region",
    "dual_subdivision",
    "line_section",
    "check_zero_convexity_along_line",
]

MAX_SUBDIVISION_DIM = 3
MAX_SUBDIVISION_TERMS = 64


def _exponent(a, n=None) -> tuple:
    if isinstance(a, int):
        a = (a,)
    a = tuple(int(x) for x in a)
    if n is not None and len(a) != n:
        raise DimensionMismatch(f"exponent {a} does not have length {n}")
    return a


def _point(w, n) -> tuple:
    if isinstance(w, (int, Fraction, str, float)):
        w = (w,)
    w = rational_point(w)
    if len(w) != n:
        raise DimensionMismatch(f"point {w} does not have dimension {n}")
    return w


class TropicalPolynomial:
    """Support and valuations of a min-plus polynomial.

    ``terms`` maps exponents (tuples, or plain ints when ``n == 1``) to
    rational valuations. ``coefficients`` optionally carries a complex leading
    coefficient per exponent, used only when sampling amoebas.

    >>> T = TropicalPolynomial({0: 0, 1: 0, 2: 1})
    >>> evaluate(T, -2)
    Fraction(-3, 1)
    """

    def __init__(self, terms: Mapping, n: Optional[int] = None, coefficients: Optional[Mapping] = None):
        items = list(terms.items())
        if not items:
            raise TooFewTerms("a tropical polynomial needs at least one term")
        if n is None:
            n = len(_exponent(items[0][0]))
        if n < 1:
            raise ValueError("dimension must be positive")
        self.n = n
        self.terms = {}
        for a, c in items:
            a = _exponent(a, n)
            if a in self.terms:
                raise ValueError(f"duplicate exponent {a}")
            self.terms[a] = to_fraction(c)
        self.coefficients = None
        if coefficients is not None:
            self.coefficients = {_exponent(a, n): complex(z) for a, z in coefficients.items()}
            if set(self.coefficients) != set(self.terms):
                raise ValueError("coefficients must be given for exactly the support")

    @property
    def exponents(self) -> tuple:
        return tuple(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, TropicalPolynomial)
            and self.n == other.n
            and self.terms == other.terms
            and self.coefficients == other.coefficients
        )

    def __repr__(self):
        body = ", ".join(f"{a}: {c}" for a, c in self.terms.items())
        return f"TropicalPolynomial({{{body}}}, n={self.n})"

    def negated(self) -> "TropicalPolynomial":
        """Same support with valuations negated (min-plus <-> max-plus at I/O)."""
        return TropicalPolynomial({a: -c for a, c in self.terms.items()}, self.n, self.coefficients)


def _values(T, w):
    return {a: c + dot(w, a) for a, c in T.terms.items()}


def evaluate(T: TropicalPolynomial, w) -> Fraction:
    """Exact value of ``min(c_a + w.a)``."""
    w = _point(w, T.n)
    return min(_values(T, w).values())


def argmin_support(T: TropicalPolynomial, w) -> frozenset:
    """Exponents attaining the minimum at ``w``."""
    w = _point(w, T.n)
    vals = _values(T, w)
    m = min(vals.values())
    return frozenset(a for a, v in vals.items() if v == m)


def _require_hypersurface(T):
    if len(T) < 2:
        raise TooFewTerms("a single term defines an empty hypersurface")


def contains(T: TropicalPolynomial, w) -> bool:
    _require_hypersurface(T)
    return len(argmin_support(T, w)) >= 2


@dataclass(frozen=True)
class LinearityRegion:
    """``{w : normal.w <= offset for each halfspace}``, the closed domain of ``monomial``.

    ``empty`` refers to the open region (all inequalities strict), so
    monomials whose closed region is lower dimensional are reported empty.
    """

    monomial: tuple
    halfspaces: tuple
    empty: bool

    def contains(self, w) -> bool:
        w = _point(w, len(self.monomial))
        return all(dot(nrm, w) <= off for nrm, off in self.halfspaces)


def linearity_region(T: TropicalPolynomial, a) -> LinearityRegion:
    a = _exponent(a, T.n)
    if a not in T.terms:
        raise UnknownExponent(a)
    ca = T.terms[a]
    halfspaces = tuple(
        (tuple(x - y for x, y in zip(a, b)), cb - ca) for b, cb in T.terms.items() if b != a
    )
    if not halfspaces:
        return LinearityRegion(a, (), False)
    n = T.n
    # maximise a uniform slack s <= 1 in normal.w + s <= offset
    A_ub = [list(nrm) + [1] for nrm, _ in halfspaces] + [[0] * n + [1]]
    b_ub = [off for _, off in halfspaces] + [1]
    res = linprog_exact([0] * n + [-1], A_ub, b_ub, free=range(n + 1))
    empty = not res.feasible or -res.fun <= 0
    return LinearityRegion(a, halfspaces, empty)


@dataclass(frozen=True)
class Cell:
    """A cell of the regular subdivision: the exponents on one lower face."""

    exponents: tuple
    dim: int

    def __contains__(self, a):
        return a in self.exponents


def _lower_facets(points, heights):
    """Index sets of the lower facets of the lifted configuration."""
    d, coords = affine_frame(points)
    if d == 0:
        return [frozenset(range(len(points)))]
    lifted = [tuple(x) + (h,) for x, h in zip(coords, heights)]
    if rank([[a - b for a, b in zip(p, lifted[0])] for p in lifted[1:]]) == d:
        return [frozenset(range(len(points)))]
    found = []
    for sub in combinations(range(len(points)), d + 1):
        if any(set(sub) <= f for f in found):
            continue
        rows = [list(coords[i]) + [1] for i in sub]
        if rank(rows) < d + 1:
            continue
        g = solve_particular(rows, [heights[i] for i in sub])
        gaps = [h - dot(g[:d], x) - g[d] for x, h in zip(coords, heights)]
        if all(v >= 0 for v in gaps):
            found.append(frozenset(i for i, v in enumerate(gaps) if v == 0))
    return found


def dual_subdivision(T: TropicalPolynomial) -> list:
    """Regular subdivision of the support induced by the valuations.

    Cells of every dimension are returned (sorted by dimension), each as the
    exponents lying on one face of the lower hull of ``{(a, c_a)}``.
    """
    if T.n > MAX_SUBDIVISION_DIM:
        raise DimensionTooLarge(f"dual subdivision supports n <= {MAX_SUBDIVISION_DIM}")
    if len(T) > MAX_SUBDIVISION_TERMS:
        raise TooManyTerms(f"dual subdivision supports at most {MAX_SUBDIVISION_TERMS} terms")
    exps = list(T.exponents)
    heights = [T.terms[a] for a in exps]
    cells = set()
    for facet in _lower_facets(exps, heights):
        members = sorted(facet)
        for face in faces([exps[i] for i in members]):
            cells.add(frozenset(exps[members[i]] for i in face))
    out = []
    for cell in cells:
        pts = sorted(cell)
        out.append(Cell(tuple(pts), affine_frame(pts)[0]))
    out.sort(key=lambda c: (c.dim, c.exponents))
    return out


@dataclass(frozen=True)
class LineSection:
    """Restriction of a tropical polynomial to the line ``p + tau*d``.

    ``labels[i]`` is the exponent attaining the minimum on the ``i``-th open
    interval cut out by the sorted ``breakpoints``.
    """

    base: tuple
    direction: tuple
    breakpoints: tuple
    labels: tuple


def line_section(T: TropicalPolynomial, p, d) -> LineSection:
    """Lower envelope of the affine functions ``tau -> c_a + (p + tau*d).a``."""
    _require_hypersurface(T)
    p = _point(p, T.n)
    d = _point(d, T.n)
    if all(x == 0 for x in d):
        raise ZeroDirection("line direction is zero")
    lines = {a: (dot(d, a), c + dot(p, a)) for a, c in T.terms.items()}

    def check_unique(a):
        for b, ln in lines.items():
            if b != a and ln == lines[a]:
                raise LineInsideHypersurface(f"terms {a} and {b} tie along the whole line")

    # at tau -> -inf the largest slope wins, then the smallest intercept
    cur = min(lines, key=lambda a: (-lines[a][0], lines[a][1]))
    check_unique(cur)
    breakpoints, labels = [], [cur]
    while True:
        s0, b0 = lines[cur]
        best = None
        for a, (s, b) in lines.items():
            if s < s0:
                tau = (b - b0) / (s0 - s)
                key = (tau, s, b)
                if best is None or key < best[0]:
                    best = (key, a)
        if best is None:
            break
        cur = best[1]
        check_unique(cur)
        breakpoints.append(best[0][0])
        labels.append(cur)
    return LineSection(p, d, tuple(breakpoints), tuple(labels))


@dataclass(frozen=True)
class ZeroConvexityReport:
    breakpoints: tuple
    labels: tuple
    passed: bool


def check_zero_convexity_along_line(T: TropicalPolynomial, p, d) -> ZeroConvexityReport:
    """Distinct components of the section must lie in distinct complement regions.

    Components of the complement are the open linearity domains, so this holds
    iff no monomial labels two different intervals. A failing report points to
    a bug rather than bad input.
    """
    sec = line_section(T, p, d)
    passed = len(set(sec.labels)) == len(sec.labels)
    return ZeroConvexityReport(sec.breakpoints, sec.labels, passed)
