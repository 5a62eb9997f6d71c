import math
from fractions import Fraction

import numpy as np
import pytest

from troplab.amoeba import (
    AmoebaSample,
    MonomialFamily,
    compact_avoidance_check,
    convergence_table,
    directed_gap,
    line_section_gap,
    polynomial_roots,
    sample_amoeba,
    tropical_target,
    tropicalization,
)
from troplab.curve import Hyperplane
from troplab.errors import (
    DegenerateFamily,
    EmptySample,
    EmptyTarget,
    NotTransverseError,
    ZMeetsTropicalLimit,
)
from troplab.geom_core import Ray, Segment

from _oracles import quadratic_roots

F = Fraction
QUAD = MonomialFamily([(0, 1, 0), (1, 1, 0), (2, 1, 1)])
TLINE = MonomialFamily([((0, 0), 1, 1), ((1, 0), 1, 0), ((0, 1), 1, 0)])
CONST = MonomialFamily([((0, 0), 1, 0), ((1, 0), 1, 0), ((0, 1), 1, 0)])
BOX = (-2, 2, -2, 2)


def test_tropicalization_examples():
    assert tropicalization(QUAD).terms == {(0,): 0, (1,): 0, (2,): 1}
    assert tropicalization(TLINE).terms == {(0, 0): 1, (1, 0): 0, (0, 1): 0}
    assert set(tropicalization(CONST).terms.values()) == {0}


def test_family_validation():
    with pytest.raises(DegenerateFamily):
        MonomialFamily([((1, 0), 1, 0)])
    with pytest.raises(ValueError):
        MonomialFamily([((1, 0), 1, 0), ((1, 0), 2, 0)])
    with pytest.raises(ValueError):
        MonomialFamily([((1, 0), 0, 0), ((0, 0), 2, 0)])


def test_quadratic_sample_matches_closed_form():
    t = 1e-6
    s = sample_amoeba(QUAD, t)
    oracle = np.sort(np.log(np.abs(quadratic_roots(1, 1, t))) / math.log(t))
    np.testing.assert_allclose(s.points[:, 0], oracle, rtol=0, atol=1e-12)
    assert np.abs(s.points[:, 0] - [-1.0, 0.0]).max() < 1e-6


def test_mirror_scaling_negates_points():
    a = sample_amoeba(QUAD, 1e-4).points
    b = sample_amoeba(QUAD, 1e-4, scaling="paper").points
    np.testing.assert_allclose(np.sort(-b[:, 0]), a[:, 0])
    assert tropical_target(QUAD, "paper") == (0, 1)
    assert tropical_target(QUAD) == (-1, 0)


@pytest.mark.parametrize("g0, g1, k, c", [(1, 0, 1, 2.0), (3, 1, 2, 5.0), (F(1, 2), 2, 3, 0.1)])
def test_sign_consistency(g0, g1, k, c):
    # c0 t^g0 + t^g1 z^k has |z| = |c0|^(1/k) t^((g0-g1)/k)
    fam = MonomialFamily([((0,), c, g0), ((k,), 1, g1)])
    limit = float(F(g0) - F(g1)) / k
    errs = []
    for t in (1e-2, 1e-4, 1e-8):
        pts = sample_amoeba(fam, t).points[:, 0]
        expected = limit + math.log(c) / (k * math.log(t))
        np.testing.assert_allclose(pts, expected, atol=1e-12)
        errs.append(abs(pts - limit).max())
    assert errs[0] > errs[1] > errs[2]


def test_polynomial_roots_against_numpy():
    rng = np.random.default_rng(3)
    for deg in (2, 5, 17, 30, 45):
        true = rng.normal(size=deg) + 1j * rng.normal(size=deg)
        coeffs = np.poly(true)[::-1]
        found = polynomial_roots(coeffs)
        for z in true:
            assert np.abs(found - z).min() < 1e-6


def test_polynomial_roots_residuals_extreme_scales():
    tol = 1e-10
    t = 1e-6
    c = np.array([t**3, 1.0, -2.0, t**2, 1e-3])
    z = polynomial_roots(c, tol)
    assert len(z) == 4
    terms = c[None, :] * z[:, None] ** np.arange(len(c))
    assert np.all(np.abs(terms.sum(axis=1)) <= tol * (1 + np.abs(terms).max(axis=1)))


def test_polynomial_roots_strips_zero_roots():
    assert len(polynomial_roots([0, 0, 1, 1])) == 1
    assert len(polynomial_roots([0, 3])) == 0


def test_bivariate_cloud_near_curve():
    s = sample_amoeba(TLINE, 1e-4, BOX, margin=0.25)
    g = directed_gap(s, tropical_target(TLINE), BOX, margin=0.25)
    assert g.target_to_sample < 0.2 and g.sample_to_target < 0.2
    assert len(s) > 0 and s.skipped == 0


def test_window_invariant():
    s = sample_amoeba(TLINE, 1e-2, (-1, 1.5, -0.5, 2), (32, 16), margin=0.1)
    P = s.points
    assert P[:, 0].min() >= -1.1 and P[:, 0].max() <= 1.6
    assert P[:, 1].min() >= -0.6 and P[:, 1].max() <= 2.1
    s = sample_amoeba(QUAD, 1e-6, (-0.5, 0.5))
    assert np.allclose(s.points[:, 0], [0.0], atol=1e-6)


def test_determinism_and_thread_merge(monkeypatch):
    a = sample_amoeba(TLINE, 1e-3, BOX, (64, 16))
    b = sample_amoeba(TLINE, 1e-3, BOX, (64, 16))
    assert np.array_equal(a.points, b.points)
    monkeypatch.setenv("TROPLAB_THREADS", "3")
    c = sample_amoeba(TLINE, 1e-3, BOX, (64, 16))
    assert np.array_equal(a.points, c.points)


def test_skipped_fibers():
    fam = MonomialFamily([((1, 0), 1, 0), ((0, 0), -1, 0)])  # z1 - 1
    s = sample_amoeba(fam, 1e-3, BOX, (16, 8), fibers="z1")
    assert len(s) == 0 and s.skipped == 16 * 8
    s = sample_amoeba(fam, 1e-3, BOX, (16, 8))
    assert s.skipped == 16 * 8 and np.allclose(s.points[:, 0], 0)


def test_directed_gap_examples():
    g = directed_gap(np.array([[0.0, 0.0]]), [Segment((0, 0), (1, 0))], (-1, 2, -1, 1))
    assert g.target_to_sample == pytest.approx(1.0)
    assert g.sample_to_target == 0.0
    pitch = 0.01
    dense = np.column_stack([np.linspace(0, 1, 301), np.zeros(301)])
    g = directed_gap(dense, [Segment((0, 0), (1, 0))], (-1, 2, -1, 1), pitch=pitch)
    assert g.target_to_sample <= pitch and g.sample_to_target <= pitch
    g = directed_gap(np.array([[0.0, 1.0]]), [Ray((0, 0), (1, 0))], (-1, 1, -1, 2))
    assert g.target_to_sample == pytest.approx(math.sqrt(2))
    assert g.sample_to_target == pytest.approx(1.0)


def test_directed_gap_point_targets():
    g = directed_gap(np.array([[0.1], [-0.9]]), (-1, 0), (-2, 1))
    assert g.target_to_sample == pytest.approx(0.1) and g.sample_to_target == pytest.approx(0.1)


def test_directed_gap_errors():
    with pytest.raises(EmptySample):
        directed_gap(np.array([[5.0, 5.0]]), [Segment((0, 0), (1, 0))], BOX)
    with pytest.raises(EmptyTarget):
        directed_gap(np.array([[0.0, 0.0]]), [Segment((3, 3), (4, 3))], BOX)


def test_convergence_univariate():
    rep = convergence_table(QUAD, [1e-2, 1e-4, 1e-6], (-2, 1), margin=0.25)
    t2s = [r.gap_t2s for r in rep.rows]
    assert t2s[0] > t2s[1] > t2s[2]
    assert t2s[2] <= 1e-3
    # oracle: worst root offset from the closed form
    for r in rep.rows:
        exact = np.sort(np.log(np.abs(quadratic_roots(1, 1, r.t))) / math.log(r.t))
        assert r.gap_t2s == pytest.approx(np.abs(exact - [-1, 0]).max(), rel=1e-9)


def test_convergence_constant_family_rate():
    # the amoeba of 1 + z1 + z2 lies within log 2 of its spine, with equality attained
    rep = convergence_table(CONST, [1e-2, 1e-4, 1e-6], BOX, margin=0.25)
    for r in rep.rows:
        ratio = r.gap_s2t * abs(math.log(r.t))
        assert 0.5 * math.log(2) <= ratio <= math.log(2) + 1e-9
    s2t = [r.gap_s2t for r in rep.rows]
    assert s2t[0] > s2t[1] > s2t[2]


def test_convergence_rejects_bad_t():
    with pytest.raises(ValueError):
        convergence_table(QUAD, [1e-4, 1e-2], (-2, 1))
    with pytest.raises(ValueError):
        convergence_table(QUAD, [1.5, 1e-2], (-2, 1))


def test_avoidance():
    rep = compact_avoidance_check(TLINE, (0, 1), F(2, 5), [1e-4, 1e-5, 1e-6], BOX)
    assert all(rep.positive) and rep.non_decreasing and rep.eventually_positive
    rep = compact_avoidance_check(TLINE, (10, 10), 1, [1e-2, 1e-4], BOX, (32, 16))
    assert all(rep.positive)
    with pytest.raises(ZMeetsTropicalLimit):
        compact_avoidance_check(TLINE, (1, 1), F(1, 10), [1e-2, 1e-4], BOX)


def test_line_section_gap():
    (g,) = line_section_gap(TLINE, 1e-6, Hyperplane((0, 1), F(1, 2)), 0.05, BOX)
    assert g.point == (F(1, 2), F(1, 2)) and g.distance < 0.15
    (g,) = line_section_gap(TLINE, 1e-6, Hyperplane((0, 1), F(3, 4)), 0.05, BOX)
    assert g.point == (F(3, 4), F(3, 4)) and g.distance < 0.15
    with pytest.raises(NotTransverseError):
        line_section_gap(TLINE, 1e-6, Hyperplane((1, -1), 0), 0.05, BOX)


def test_sample_type():
    s = sample_amoeba(QUAD, 0.5)
    assert isinstance(s, AmoebaSample) and s.scale == pytest.approx(1 / math.log(0.5))
    with pytest.raises(ValueError):
        sample_amoeba(QUAD, 1.0)
    with pytest.raises(ValueError):
        sample_amoeba(TLINE, 0.1)


CONIC = MonomialFamily([((0, 0), 1, 0), ((1, 0), 1, 0), ((0, 1), 1, 0), ((1, 1), 1, 1)])


@pytest.mark.parametrize(
    "name, fam, window",
    [("quadratic", QUAD, (-2, 1)), ("t+z1+z2", TLINE, BOX), ("1+z1+z2", CONST, BOX), ("conic", CONIC, BOX)],
)
def test_target_to_sample_non_increasing_within_5_percent(name, fam, window):
    rep = convergence_table(fam, [1e-2, 1e-4, 1e-6], window, margin=0.25)
    t2s = [r.gap_t2s for r in rep.rows]
    for a, b in zip(t2s, t2s[1:]):
        assert b <= 1.05 * a, f"{name}: {t2s}"
