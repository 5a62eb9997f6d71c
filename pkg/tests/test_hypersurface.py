import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.spatial import ConvexHull

from troplab.errors import (
    DimensionTooLarge,
    LineInsideHypersurface,
    TooFewTerms,
    TooManyTerms,
    UnknownExponent,
    ZeroDirection,
)
from troplab.geom_core import dot, solve_particular
from troplab.hypersurface import (
    TropicalPolynomial,
    argmin_support,
    check_zero_convexity_along_line,
    contains,
    dual_subdivision,
    evaluate,
    line_section,
    linearity_region,
)

from _oracles import (
    normalized_volume,
    random_polynomial_terms,
    random_rational,
    random_rational_point,
    simplex_normalized_volume,
)

QUAD = TropicalPolynomial({0: 0, 1: 0, 2: 1})
LINE = TropicalPolynomial({(0, 0): 0, (1, 0): 0, (0, 1): 0})
RIDGE = TropicalPolynomial({(0, 0): 0, (1, 0): 0})
F = Fraction


def test_evaluate_examples():
    assert evaluate(QUAD, -2) == -3
    assert evaluate(LINE, (2, 3)) == 0
    assert evaluate(QUAD, -1) == -1


@pytest.mark.parametrize(
    "w, expected", [(0, {(0,), (1,)}), (F(1, 2), {(0,)}), (-1, {(1,), (2,)})]
)
def test_argmin_and_contains(w, expected):
    assert argmin_support(QUAD, w) == expected
    assert contains(QUAD, w) == (len(expected) >= 2)


def test_single_term_rejected():
    T = TropicalPolynomial({(1, 1): 3})
    assert evaluate(T, (1, 1)) == 5
    with pytest.raises(TooFewTerms):
        contains(T, (0, 0))
    with pytest.raises(TooFewTerms):
        line_section(T, (0, 0), (1, 0))


def test_linearity_region_examples():
    reg = linearity_region(LINE, (0, 0))
    assert not reg.empty
    assert reg.contains((0, 0)) and reg.contains((3, 1)) and not reg.contains((-1, 2))
    reg = linearity_region(QUAD, 1)
    assert not reg.empty
    assert reg.contains(-1) and reg.contains(0) and not reg.contains(F(1, 10)) and not reg.contains(F(-11, 10))
    assert linearity_region(TropicalPolynomial({0: 0, 1: 5, 2: 1}), 1).empty


def test_linearity_region_bounds_for_t_middle_term():
    # w <= -5 and w >= 4
    reg = linearity_region(TropicalPolynomial({0: 0, 1: 5, 2: 1}), 1)
    assert set(reg.halfspaces) == {((1,), F(-5)), ((-1,), F(-4))}


def test_linearity_region_unknown_monomial():
    with pytest.raises(UnknownExponent):
        linearity_region(LINE, (2, 2))


def _cells(T):
    return [(c.dim, set(c.exponents)) for c in dual_subdivision(T)]


def test_dual_subdivision_examples():
    top = [set(e) for d, e in _cells(QUAD) if d == 1]
    assert top == [{(0,), (1,)}, {(1,), (2,)}]
    top = [set(e) for d, e in _cells(TropicalPolynomial({0: 0, 1: 5, 2: 1})) if d == 1]
    assert top == [{(0,), (2,)}]
    top = [set(e) for d, e in _cells(LINE) if d == 2]
    assert top == [set(LINE.exponents)]


def test_dual_subdivision_limits():
    with pytest.raises(DimensionTooLarge):
        dual_subdivision(TropicalPolynomial({(0, 0, 0, 0): 0, (1, 0, 0, 0): 0}))
    big = {(i, j): 0 for i in range(9) for j in range(8)}
    with pytest.raises(TooManyTerms):
        dual_subdivision(TropicalPolynomial(big))


def test_non_generic_square_is_one_cell():
    sq = TropicalPolynomial({(0, 0): 0, (1, 0): 0, (0, 1): 0, (1, 1): 0})
    assert [set(e) for d, e in _cells(sq) if d == 2] == [set(sq.exponents)]


def _scipy_lower_cells(T):
    pts = list(T.exponents)
    P = np.array([list(a) + [float(T.terms[a])] for a in pts])
    hull = ConvexHull(P)
    out = set()
    for eq in hull.equations:
        if eq[-2] < -1e-12:  # outward normal pointing down
            out.add(frozenset(pts[i] for i in np.flatnonzero(np.abs(P @ eq[:-1] + eq[-1]) < 1e-9)))
    return out


def _generic_plane_poly(rng):
    while True:
        terms = random_polynomial_terms(rng, 2, 10, den=997)
        if len(terms) >= 4 and np.linalg.matrix_rank(np.array(list(terms), float) - list(terms)[0]) == 2:
            return TropicalPolynomial(terms)


@pytest.mark.parametrize("seed", range(20))
def test_dual_subdivision_matches_scipy_lower_hull(seed):
    T = _generic_plane_poly(random.Random(seed))
    ours = {frozenset(c.exponents) for c in dual_subdivision(T) if c.dim == 2}
    assert ours == _scipy_lower_cells(T)


@pytest.mark.parametrize("seed", range(20))
def test_generic_subdivision_is_triangulation_with_full_volume(seed):
    T = _generic_plane_poly(random.Random(seed))
    top = [c for c in dual_subdivision(T) if c.dim == 2]
    assert all(len(c.exponents) == 3 for c in top)
    total = sum(simplex_normalized_volume(list(c.exponents)) for c in top)
    assert total == pytest.approx(normalized_volume(T.exponents), abs=1e-9)


def _dual_point(T, cell):
    # w with c_a + w.a equal on the cell: solve c_a + w.a = h
    rows = [list(a) + [-1] for a in cell.exponents]
    rhs = [-T.terms[a] for a in cell.exponents]
    sol = solve_particular(rows, rhs)
    return tuple(sol[: T.n])


@pytest.mark.parametrize("seed", range(20))
def test_argmin_set_is_a_cell(seed):
    rng = random.Random(seed)
    n = rng.choice([1, 2, 3])
    T = TropicalPolynomial(random_polynomial_terms(rng, n, 8, box=2))
    cells = {frozenset(c.exponents) for c in dual_subdivision(T)}
    probes = [random_rational_point(rng, n) for _ in range(20)]
    probes += [_dual_point(T, c) for c in dual_subdivision(T) if c.dim == n]
    for w in probes:
        assert argmin_support(T, w) in cells


@pytest.mark.parametrize("seed", range(15))
def test_contains_iff_two_closed_regions(seed):
    rng = random.Random(seed)
    T = TropicalPolynomial(random_polynomial_terms(rng, 2, 6, box=2))
    regions = [linearity_region(T, a) for a in T.exponents]
    probes = [random_rational_point(rng, 2) for _ in range(15)]
    probes += [_dual_point(T, c) for c in dual_subdivision(T) if c.dim == 2]
    for c in dual_subdivision(T):
        if c.dim == 1 and len(c.exponents) == 2:
            # midpoint-ish point on the ridge: dual point of the edge nudged along it
            a, b = c.exponents
            probes.append(tuple(x for x in _ridge_point(T, a, b)))
    for w in probes:
        n_regions = sum(1 for r in regions if not r.empty and r.contains(w))
        assert contains(T, w) == (n_regions >= 2)


def _ridge_point(T, a, b):
    # some point with c_a + w.a = c_b + w.b
    diff = [x - y for x, y in zip(a, b)]
    k = next(i for i, x in enumerate(diff) if x)
    w = [F(0)] * T.n
    w[k] = (T.terms[b] - T.terms[a]) / diff[k]
    return tuple(w)


def test_line_section_examples():
    sec = line_section(LINE, (0, -1), (1, 0))
    assert sec.breakpoints == (-1,)
    assert sec.labels == ((1, 0), (0, 1))
    sec = line_section(RIDGE, (1, 0), (0, 1))
    assert sec.breakpoints == () and sec.labels == ((0, 0),)
    with pytest.raises(LineInsideHypersurface):
        line_section(RIDGE, (0, 0), (0, 1))
    with pytest.raises(ZeroDirection):
        line_section(LINE, (0, 0), (0, 0))


def test_zero_convexity_examples():
    rep = check_zero_convexity_along_line(LINE, (0, -1), (1, 0))
    assert rep.passed and rep.labels == ((1, 0), (0, 1))
    rep = check_zero_convexity_along_line(QUAD, 0, 1)
    assert rep.breakpoints == (-1, 0)
    assert rep.labels == ((2,), (1,), (0,))
    assert rep.passed
    with pytest.raises(LineInsideHypersurface):
        check_zero_convexity_along_line(RIDGE, (0, 5), (0, -3))


@pytest.mark.parametrize("seed", range(30))
def test_envelope_consistency(seed):
    rng = random.Random(seed)
    n = rng.choice([1, 2, 3, 4])
    T = TropicalPolynomial(random_polynomial_terms(rng, n, 12))
    p = random_rational_point(rng, n)
    d = random_rational_point(rng, n)
    if not any(d):
        return
    sec = line_section(T, p, d)
    assert list(sec.breakpoints) == sorted(sec.breakpoints)
    taus = [random_rational(rng, 40, 9) for _ in range(30)] + list(sec.breakpoints)
    for tau in taus:
        x = tuple(pi + tau * di for pi, di in zip(p, d))
        i = sum(1 for b in sec.breakpoints if b < tau)
        a = sec.labels[i]
        assert evaluate(T, x) == T.terms[a] + dot(x, a)
    # consecutive labels differ and breakpoints are ties
    for b, (l0, l1) in zip(sec.breakpoints, zip(sec.labels, sec.labels[1:])):
        x = tuple(pi + b * di for pi, di in zip(p, d))
        assert l0 != l1 and {l0, l1} <= argmin_support(T, x)


@pytest.mark.parametrize("seed", range(40))
def test_zero_convexity_random(seed):
    rng = random.Random(1000 + seed)
    n = rng.choice([2, 3, 4])
    T = TropicalPolynomial(random_polynomial_terms(rng, n, 12))
    for _ in range(5):
        d = random_rational_point(rng, n)
        if any(d):
            assert check_zero_convexity_along_line(T, random_rational_point(rng, n), d).passed


def test_negated_and_equality():
    T = TropicalPolynomial({0: 1, 2: F(-1, 2)})
    assert T.negated().terms == {(0,): -1, (2,): F(1, 2)}
    assert T.negated().negated() == T
