"""Scaled amoebas of one-parameter polynomial families and their tropical limits.

A :class:`MonomialFamily` is ``f_t(z) = sum_a coeff_a * t**gamma_a * z**a`` for
real ``t`` in (0, 1). Its roots are mapped to ``log|z| / log t`` (the
``"minplus"`` scaling, which converges to the min-plus tropical curve with
valuations ``gamma_a``) or to ``-log|z| / log t`` (``"paper"``, the mirror
image). Everything here is floating point; the tropical targets are exact.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .curve import (
    BalancedGraph,
    Edge,
    Hyperplane,
    NotTransverse,
    curve_from_plane_tropical_polynomial,
    hyperplane_transversal,
)
from .errors import (
    DegenerateFamily,
    DimensionMismatch,
    EmptySample,
    EmptyTarget,
    NotTransverseError,
    RootFindingDiverged,
    ZMeetsTropicalLimit,
)
from .geom_core import Ray, Segment, distances_to_piece, rational_point, squared_distance_exact, to_fraction
from .hypersurface import TropicalPolynomial, line_section

__all__ = [
    "FamilyTerm",
    "MonomialFamily",
    "AmoebaSample",
    "Gaps",
    "GapRow",
    "GapReport",
    "AvoidanceReport",
    "SectionGap",
    "tropicalization",
    "polynomial_roots",
    "sample_amoeba",
    "tropical_target",
    "directed_gap",
    "convergence_table",
    "compact_avoidance_check",
    "line_section_gap",
]

SCALINGS = ("minplus", "paper")
COMPANION_MAX_DEGREE = 30
ABERTH_MAX_ITER = 200
DEFAULT_TOL = 1e-10
DEFAULT_GRID = (256, 64)
DEFAULT_PITCH = 0.005


@dataclass(frozen=True)
class FamilyTerm:
    exponent: tuple
    coeff: complex
    gamma: Fraction


class MonomialFamily:
    """Polynomial family with monomial Puiseux coefficients ``coeff * t**gamma``."""

    def __init__(self, terms: Sequence, n: Optional[int] = None):
        parsed = []
        for term in terms:
            if not isinstance(term, FamilyTerm):
                a, coeff, gamma = term
                if isinstance(a, int):
                    a = (a,)
                term = FamilyTerm(tuple(int(x) for x in a), complex(coeff), to_fraction(gamma))
            parsed.append(term)
        if len(parsed) < 2:
            raise DegenerateFamily("a family needs at least two terms")
        if n is None:
            n = len(parsed[0].exponent)
        if n not in (1, 2):
            raise DimensionMismatch("amoeba sampling supports n = 1 or 2")
        if any(len(t.exponent) != n for t in parsed):
            raise DimensionMismatch(f"all exponents must have length {n}")
        if len({t.exponent for t in parsed}) != len(parsed):
            raise ValueError("duplicate exponent in family")
        if any(t.coeff == 0 for t in parsed):
            raise ValueError("leading coefficients must be nonzero")
        self.n = n
        self.terms = tuple(parsed)

    def coefficients_at(self, t: float) -> np.ndarray:
        return np.array([term.coeff * t ** float(term.gamma) for term in self.terms])

    def __repr__(self):
        body = " + ".join(f"({t.coeff})t^{t.gamma}z^{t.exponent}" for t in self.terms)
        return f"MonomialFamily({body})"


def tropicalization(F: MonomialFamily) -> TropicalPolynomial:
    """Min-plus polynomial with valuations ``gamma_a`` (coefficients carried along)."""
    return TropicalPolynomial(
        {t.exponent: t.gamma for t in F.terms},
        F.n,
        coefficients={t.exponent: t.coeff for t in F.terms},
    )


# --- roots --------------------------------------------------------------------


def _residual_ok(c, z, tol):
    """Relative residual test on coefficient rows ``c`` (lowest degree first)."""
    k = np.arange(c.shape[-1])
    terms = c[..., None, :] * z[..., :, None] ** k
    val = np.abs(terms.sum(axis=-1))
    scale = np.abs(terms).max(axis=-1)
    return val <= tol * (1.0 + scale)


def _newton(c, z, steps=3):
    dc = c[..., 1:] * np.arange(1, c.shape[-1])
    for _ in range(steps):
        k = np.arange(c.shape[-1])
        f = (c[..., None, :] * z[..., :, None] ** k).sum(axis=-1)
        df = (dc[..., None, :] * z[..., :, None] ** k[:-1]).sum(axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(df != 0, f / df, 0)
        z = z - np.where(np.isfinite(step), step, 0)
    return z


def _aberth(c, tol):
    """Simultaneous Aberth iteration for one polynomial (lowest degree first)."""
    deg = len(c) - 1
    p = np.polynomial.Polynomial(c)
    dp = p.deriv()
    # initial guesses on a circle sized by the Cauchy bound
    radius = 1 + np.max(np.abs(c[:-1] / c[-1]))
    z = radius ** 0.5 * np.exp(1j * (2 * np.pi * np.arange(deg) / deg + 0.4))
    for _ in range(ABERTH_MAX_ITER):
        ratio = p(z) / dp(z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1)
        inv = 1 / diff
        np.fill_diagonal(inv, 0)
        w = ratio / (1 - ratio * inv.sum(axis=1))
        z = z - w
        if np.all(np.abs(w) <= tol * (1 + np.abs(z))):
            break
    return z


def _trim(c):
    """Strip exact zero coefficients at both ends; returns (low, high) or None."""
    nz = np.flatnonzero(c)
    if nz.size < 2:
        return None
    return nz[0], nz[-1]


def polynomial_roots(coeffs, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Nonzero complex roots of ``sum(coeffs[k] * z**k)``.

    Coefficients are rescaled by their largest magnitude first. Degrees up to
    30 use companion-matrix eigenvalues, higher ones Aberth iteration. Raises
    :class:`RootFindingDiverged` when a polished root still fails the relative
    residual test.
    """
    c = np.asarray(coeffs, dtype=complex)
    span = _trim(c)
    if span is None:
        return np.empty(0, dtype=complex)
    c = c[span[0] : span[1] + 1]
    return _roots_batch(c[None, :], tol)[0]


def _roots_batch(C, tol):
    """Roots for rows of equal degree with nonzero end coefficients."""
    C = C / np.abs(C).max(axis=1, keepdims=True)
    deg = C.shape[1] - 1
    if deg == 1:
        Z = (-C[:, 0] / C[:, 1])[:, None]
    elif deg <= COMPANION_MAX_DEGREE:
        comp = np.zeros((C.shape[0], deg, deg), dtype=complex)
        comp[:, 1:, :-1] = np.eye(deg - 1)
        comp[:, :, -1] = -C[:, :-1] / C[:, -1:]
        Z = np.linalg.eigvals(comp)
    else:
        Z = np.stack([_aberth(row, tol) for row in C])
    ok = _residual_ok(C, Z, tol)
    if not ok.all():
        Z = _newton(C, Z)
        ok = _residual_ok(C, Z, tol)
        if not ok.all():
            raise RootFindingDiverged(f"{int((~ok).sum())} roots fail the residual test")
    return Z


def _fiber_roots(C, tol):
    """Roots of each row of ``C`` (lowest degree first) in the torus.

    Returns ``(roots per row, skipped mask)``. Rows with fewer than two
    nonzero coefficients have no torus roots and are skipped.
    """
    out = [None] * len(C)
    skipped = np.zeros(len(C), dtype=bool)
    groups = {}
    for i, row in enumerate(C):
        span = _trim(row)
        if span is None:
            skipped[i] = True
            out[i] = np.empty(0, dtype=complex)
        else:
            groups.setdefault(span, []).append(i)
    for (lo, hi), idx in sorted(groups.items()):
        Z = _roots_batch(C[idx, lo : hi + 1], tol)
        for j, i in enumerate(idx):
            out[i] = Z[j]
    return out, skipped


# --- sampling -----------------------------------------------------------------


@dataclass(frozen=True)
class AmoebaSample:
    t: float
    scale: float
    points: np.ndarray  # shape (N, n), already scaled
    skipped: int
    scaling: str = "minplus"

    def __len__(self):
        return len(self.points)


def _sign(scaling):
    if scaling not in SCALINGS:
        raise ValueError(f"scaling must be one of {SCALINGS}")
    return 1.0 if scaling == "minplus" else -1.0


def _threads():
    try:
        n = int(os.environ.get("TROPLAB_THREADS", "1"))
    except ValueError:
        n = 1
    return n if n > 0 else (os.cpu_count() or 1)


def _fiber_block(F, t, logmod, args, free_axis, tol):
    """Solve the fibers ``z_fixed = exp(logmod + i*arg)`` for the free variable."""
    fixed_axis = 1 - free_axis
    coeffs = F.coefficients_at(t)
    free_pows = np.array([term.exponent[free_axis] for term in F.terms])
    fixed_pows = np.array([term.exponent[fixed_axis] for term in F.terms], dtype=float)
    lo = free_pows.min()
    width = free_pows.max() - lo + 1
    logz = (logmod[:, None] + 1j * args[None, :]).ravel()
    # coefficient of z_free**k in each fiber, computed in log space to avoid overflow
    mono = coeffs[None, :] * np.exp(np.outer(logz, fixed_pows))
    C = np.zeros((len(logz), width), dtype=complex)
    for j, k in enumerate(free_pows - lo):
        C[:, k] += mono[:, j]
    roots, skipped = _fiber_roots(C, tol)
    rows = []
    for lz, zs in zip(logz, roots):
        for z in zs:
            pt = [0.0, 0.0]
            pt[fixed_axis] = lz.real
            pt[free_axis] = math.log(abs(z))
            rows.append(pt)
    return rows, int(skipped.sum())


def sample_amoeba(
    F: MonomialFamily,
    t: float,
    window: Optional[Sequence[float]] = None,
    grid: Sequence[int] = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
    margin: float = 0.0,
    scaling: str = "minplus",
    fibers: str = "both",
) -> AmoebaSample:
    """Point cloud of the scaled amoeba of ``f_t``.

    For ``n == 1`` the roots of ``f_t`` are scaled directly. For ``n == 2``
    the first coordinate runs over a grid of log-moduli (``grid[0]`` values
    spanning the window plus margin) times arguments (``grid[1]`` values on
    the circle), and the fiber polynomial is solved for the second coordinate.
    With ``fibers="both"`` the roles of the coordinates are swapped as well,
    which resolves the thin tentacles parallel to the second axis.
    Points outside ``window`` grown by ``margin`` are dropped.
    """
    if not 0 < t < 1:
        raise ValueError("t must lie in (0, 1)")
    sign = _sign(scaling)
    log_t = math.log(t)
    scale = 1.0 / log_t
    if F.n == 1:
        lo = min(term.exponent[0] for term in F.terms)
        hi = max(term.exponent[0] for term in F.terms)
        c = np.zeros(hi - lo + 1, dtype=complex)
        for term, val in zip(F.terms, F.coefficients_at(t)):
            c[term.exponent[0] - lo] += val
        if _trim(c) is None:
            raise DegenerateFamily("f_t has no roots in the torus")
        z = polynomial_roots(c, tol)
        pts = (sign * np.log(np.abs(z)) / log_t)[:, None]
        if window is not None:
            x0, x1 = window[:2]
            keep = (pts[:, 0] >= x0 - margin) & (pts[:, 0] <= x1 + margin)
            pts = pts[keep]
        order = np.argsort(pts[:, 0], kind="stable")
        return AmoebaSample(t, scale, pts[order], 0, scaling)

    if window is None or len(window) != 4:
        raise ValueError("a window (x0, x1, y0, y1) is required for n = 2")
    if fibers not in ("z1", "both"):
        raise ValueError("fibers must be 'z1' or 'both'")
    M, K = (int(g) for g in grid)
    if M < 8 or K < 8:
        raise ValueError("grid counts must be at least 8")
    x0, x1, y0, y1 = (float(v) for v in window)
    args = 2 * np.pi * np.arange(K) / K
    axes = [(0, (x0, x1))] + ([(1, (y0, y1))] if fibers == "both" else [])

    jobs = []
    for fixed_axis, (a, b) in axes:
        grid_x = np.linspace(a - margin, b + margin, M)
        logmod = sign * grid_x * log_t
        for block in np.array_split(np.arange(M), min(M, 16)):
            jobs.append((logmod[block], 1 - fixed_axis))

    def run(job):
        return _fiber_block(F, t, job[0], args, job[1], tol)

    nthreads = _threads()
    if nthreads > 1:
        with ThreadPoolExecutor(nthreads) as ex:
            results = list(ex.map(run, jobs))
    else:
        results = [run(job) for job in jobs]

    rows, skipped = [], 0
    for r, s in results:
        rows.extend(r)
        skipped += s
    pts = sign * np.asarray(rows, dtype=float).reshape(-1, 2) / log_t
    keep = (
        (pts[:, 0] >= x0 - margin)
        & (pts[:, 0] <= x1 + margin)
        & (pts[:, 1] >= y0 - margin)
        & (pts[:, 1] <= y1 + margin)
    )
    return AmoebaSample(t, scale, pts[keep], skipped, scaling)


# --- gaps against the tropical limit --------------------------------------------


def _mirror_graph(G: BalancedGraph) -> BalancedGraph:
    edges = [Edge(e.kind, e.u, e.v, tuple(-x for x in e.direction), e.weight) for e in G.edges]
    return BalancedGraph(G.n, [tuple(-x for x in v) for v in G.vertices], edges)


def tropical_target(F: MonomialFamily, scaling: str = "minplus"):
    """Exact tropical limit: a graph for ``n == 2``, sorted rational points for ``n == 1``.

    Under ``"paper"`` scaling the limit is the mirror image of the min-plus curve.
    """
    sign = _sign(scaling)
    T = tropicalization(F)
    if F.n == 2:
        G = curve_from_plane_tropical_polynomial(T)
        return G if sign > 0 else _mirror_graph(G)
    sec = line_section(T, (0,), (1,))
    pts = [bp if sign > 0 else -bp for bp in sec.breakpoints]
    return tuple(sorted(pts))


class Gaps(NamedTuple):
    target_to_sample: float
    sample_to_target: float


def _shrunk(window, margin, n):
    w = [float(v) for v in window]
    return [(w[2 * i] + margin, w[2 * i + 1] - margin) for i in range(n)]


def _inside(X, box):
    mask = np.ones(len(X), dtype=bool)
    for i, (a, b) in enumerate(box):
        mask &= (X[:, i] >= a) & (X[:, i] <= b)
    return mask


def _clip(p, d, lo_hi, box):
    """Parameter range of ``p + s*d`` (s in lo_hi) inside ``box``, or None."""
    lo, hi = lo_hi
    for i, (a, b) in enumerate(box):
        if d[i] == 0:
            if not a <= p[i] <= b:
                return None
            continue
        s0, s1 = (a - p[i]) / d[i], (b - p[i]) / d[i]
        if s0 > s1:
            s0, s1 = s1, s0
        lo, hi = max(lo, s0), min(hi, s1)
    return (lo, hi) if lo <= hi else None


def _as_pieces(target):
    if isinstance(target, BalancedGraph):
        return target.pieces()
    target = list(target)
    if target and isinstance(target[0], (Segment, Ray)):
        return target
    return None


def _sample_pieces(pieces, box, pitch):
    out = []
    for piece in pieces:
        p = np.array([float(x) for x in piece.start])
        if isinstance(piece, Segment):
            d = np.array([float(x) for x in piece.end]) - p
            rng = (0.0, 1.0)
        else:
            d = np.array([float(x) for x in piece.direction])
            rng = (0.0, np.inf)
        span = _clip(p, d, rng, box)
        if span is None:
            continue
        length = (span[1] - span[0]) * np.linalg.norm(d)
        k = max(int(math.ceil(length / pitch)), 1)
        s = np.linspace(span[0], span[1], k + 1)
        out.append(p + s[:, None] * d)
    return np.concatenate(out) if out else np.empty((0, len(box)))


def directed_gap(sample, target, window, margin: float = 0.0, pitch: float = DEFAULT_PITCH) -> Gaps:
    """One-sided distances between a cloud and a target inside a shrunk window.

    ``target_to_sample`` is the largest distance from a point of the target
    (sampled at spacing ``pitch``) to the nearest cloud point;
    ``sample_to_target`` is the largest distance from a cloud point to the
    target. Only target samples and cloud points inside ``window`` shrunk by
    ``margin`` take part; nearest cloud points may lie anywhere.
    """
    cloud = sample.points if isinstance(sample, AmoebaSample) else sample
    cloud = np.asarray(cloud, dtype=float)
    if cloud.ndim == 1:
        cloud = cloud[:, None]
    n = cloud.shape[1]
    box = _shrunk(window, margin, n)
    inner = cloud[_inside(cloud, box)]
    if len(cloud) == 0 or len(inner) == 0:
        raise EmptySample("no sample points inside the shrunk window")

    pieces = _as_pieces(target)
    if pieces is None:
        tpts = np.asarray([[float(x) for x in np.atleast_1d(p)] for p in target], dtype=float).reshape(-1, n)
        tsamp = tpts[_inside(tpts, box)]
        if len(tsamp) == 0:
            raise EmptyTarget("target has no points inside the shrunk window")
        s2t = cKDTree(tpts).query(inner)[0].max()
    else:
        tsamp = _sample_pieces(pieces, box, pitch)
        if len(tsamp) == 0:
            raise EmptyTarget("target does not meet the shrunk window")
        dist = np.min([distances_to_piece(inner, piece) for piece in pieces], axis=0)
        s2t = dist.max()
    t2s = cKDTree(cloud).query(tsamp)[0].max()
    return Gaps(float(t2s), float(s2t))


@dataclass(frozen=True)
class GapRow:
    t: float
    scale: float
    n_points: int
    skipped: int
    gap_t2s: float
    gap_s2t: float
    runtime_ms: float


@dataclass(frozen=True)
class GapReport:
    rows: tuple
    window: tuple
    margin: float
    scaling: str

    @property
    def t_values(self):
        return tuple(r.t for r in self.rows)


def _check_t_list(ts):
    ts = [float(t) for t in ts]
    if len(ts) < 2:
        raise ValueError("need at least two values of t")
    if any(not 0 < t < 1 for t in ts) or any(b >= a for a, b in zip(ts, ts[1:])):
        raise ValueError("t values must be strictly decreasing in (0, 1)")
    return ts


def convergence_table(
    F: MonomialFamily,
    ts: Sequence[float],
    window: Sequence[float],
    grid: Sequence[int] = DEFAULT_GRID,
    margin: float = 0.25,
    tol: float = DEFAULT_TOL,
    scaling: str = "minplus",
    fibers: str = "both",
    pitch: float = DEFAULT_PITCH,
) -> GapReport:
    """Directed gaps between the scaled amoeba and its tropical limit for each t."""
    ts = _check_t_list(ts)
    target = tropical_target(F, scaling)
    rows = []
    for t in ts:
        start = time.perf_counter()
        sample = sample_amoeba(F, t, window, grid, tol, margin, scaling, fibers)
        gaps = directed_gap(sample, target, window, margin, pitch)
        elapsed = 1000 * (time.perf_counter() - start)
        rows.append(
            GapRow(t, sample.scale, len(sample), sample.skipped, gaps.target_to_sample, gaps.sample_to_target, elapsed)
        )
    return GapReport(tuple(rows), tuple(float(v) for v in window), float(margin), scaling)


@dataclass(frozen=True)
class AvoidanceReport:
    t_values: tuple
    clearances: tuple  # min over cloud of |y - center| - radius
    positive: tuple
    eventually_positive: bool  # positive for every t below the first positive one
    non_decreasing: bool


def _exact_clearance_ok(target, center, radius):
    r2 = radius * radius
    if isinstance(target, BalancedGraph):
        return all(squared_distance_exact(center, piece) > r2 for piece in target.pieces())
    return all((center[0] - x) ** 2 > r2 for x in target)


def compact_avoidance_check(
    F: MonomialFamily,
    center,
    radius,
    ts: Sequence[float],
    window: Sequence[float],
    grid: Sequence[int] = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
    scaling: str = "minplus",
    fibers: str = "both",
) -> AvoidanceReport:
    """How far the scaled amoebas stay from a closed ball missing the tropical limit."""
    ts = _check_t_list(ts)
    center = rational_point(center if not isinstance(center, (int, float, str, Fraction)) else [center])
    radius = to_fraction(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    target = tropical_target(F, scaling)
    if not _exact_clearance_ok(target, center, radius):
        raise ZMeetsTropicalLimit("the ball meets the tropical limit")
    c = np.array([float(x) for x in center])
    clearances = []
    for t in ts:
        sample = sample_amoeba(F, t, window, grid, tol, 0.0, scaling, fibers)
        pts = sample.points
        if len(pts) == 0:
            clearances.append(math.inf)
            continue
        clearances.append(float(np.linalg.norm(pts - c, axis=1).min() - float(radius)))
    positive = tuple(x > 0 for x in clearances)
    first = positive.index(True) if True in positive else None
    eventually = first is not None and all(positive[first:])
    non_decreasing = all(b >= a for a, b in zip(clearances, clearances[1:]))
    return AvoidanceReport(tuple(ts), tuple(clearances), positive, eventually, non_decreasing)


@dataclass(frozen=True)
class SectionGap:
    point: tuple  # exact intersection of the line with the tropical curve
    edge: int
    distance: float  # to the nearest cloud point in the tube; inf when the tube is empty
    empty_tube: bool


def line_section_gap(
    F: MonomialFamily,
    t: float,
    line: Hyperplane,
    eta: float,
    window: Sequence[float],
    grid: Sequence[int] = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
    scaling: str = "minplus",
    fibers: str = "both",
) -> list:
    """Distance from each point of ``line`` on the tropical curve to the amoeba near the line."""
    if F.n != 2:
        raise DimensionMismatch("line sections need a plane family")
    if eta <= 0:
        raise ValueError("tube radius must be positive")
    target = tropical_target(F, scaling)
    section = hyperplane_transversal(target, line)
    if isinstance(section, NotTransverse):
        raise NotTransverseError(section.reasons)
    sample = sample_amoeba(F, t, window, grid, tol, 0.0, scaling, fibers)
    w = np.array(line.normal, dtype=float)
    pts = sample.points
    tube = pts[np.abs(pts @ w - float(line.offset)) / np.linalg.norm(w) <= eta]
    out = []
    for c in section.crossings:
        x = np.array([float(v) for v in c.point])
        if len(tube):
            d = float(np.linalg.norm(tube - x, axis=1).min())
            out.append(SectionGap(c.point, c.edge, d, False))
        else:
            out.append(SectionGap(c.point, c.edge, math.inf, True))
    return out
