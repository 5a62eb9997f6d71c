"""Independent reference computations and random generators shared by the tests.

Nothing here calls into the LP or hull code under test.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import sympy


def primitive(v):
    g = math.gcd(*v)
    return tuple(x // g for x in v)


def random_direction(rng: random.Random, n: int, box: int = 3):
    while True:
        v = tuple(rng.randint(-box, box) for _ in range(n))
        if any(v):
            return primitive(v)


def random_star(rng: random.Random, n: int, k: int, balanced: bool):
    """``k`` distinct primitive directions; when ``balanced`` a positive integer relation exists."""
    while True:
        dirs = []
        while len(dirs) < (k - 1 if balanced else k):
            v = random_direction(rng, n)
            if v not in dirs:
                dirs.append(v)
        if balanced:
            total = [0] * n
            for v in dirs:
                alpha = rng.randint(1, 3)
                total = [s + alpha * x for s, x in zip(total, v)]
            if not any(total):
                continue
            last = primitive(tuple(-x for x in total))
            if last in dirs:
                continue
            dirs.append(last)
        return dirs


def dual_cone_witness(dirs):
    """Exact search for ``w`` with ``w.v >= 0`` for all ``v`` and ``> 0`` for some.

    The cone ``{w : w.v >= 0}`` modulo the orthogonal complement of the span is
    pointed, so a witness exists iff one exists among its extreme rays. Each
    extreme ray is cut out, inside the span, by ``k - 1`` independent tight
    constraints (``k`` the rank of ``dirs``). Candidates are enumerated with
    sympy nullspaces.
    """
    M = sympy.Matrix(dirs)
    k = M.rank()
    basis = M.T.columnspace()
    B = sympy.Matrix.hstack(*basis)  # n x k, columns span(dirs)
    candidates = []
    for sub in itertools.combinations(range(len(dirs)), k - 1):
        rows = sympy.Matrix([list(dirs[i]) for i in sub]) * B if sub else sympy.zeros(0, k)
        ns = rows.nullspace() if sub else [sympy.eye(k)[:, j] for j in range(k)]
        if sub and len(ns) != 1:
            continue
        for y in ns:
            for sign in (1, -1):
                candidates.append(B * (sign * y))
    for w in candidates:
        vals = [sum(wi * vi for wi, vi in zip(w, v)) for v in dirs]
        if all(x >= 0 for x in vals) and any(x > 0 for x in vals):
            return tuple(Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in w)
    return None


def sampled_witness(dirs, n_samples: int = 4096, seed: int = 0):
    """Brute force over integer directions; can only ever prove ``False``."""
    rng = np.random.default_rng(seed)
    W = rng.integers(-6, 7, size=(n_samples, len(dirs[0])))
    # make sure the coordinate directions are among the probes
    W[: 2 * len(dirs[0])] = np.vstack([np.eye(len(dirs[0]), dtype=int), -np.eye(len(dirs[0]), dtype=int)])
    P = W @ np.array(dirs).T
    ok = (P >= 0).all(axis=1) & (P > 0).any(axis=1)
    idx = np.flatnonzero(ok)
    return None if len(idx) == 0 else tuple(int(x) for x in W[idx[0]])


def relint_oracle(dirs) -> bool:
    return dual_cone_witness(dirs) is None


def random_rational(rng: random.Random, num: int = 20, den: int = 20) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_polynomial_terms(rng: random.Random, n: int, max_terms: int, box: int = 3, den: int = 20):
    k = rng.randint(2, min(max_terms, (box + 1) ** n))
    pts = set()
    while len(pts) < k:
        pts.add(tuple(rng.randint(0, box) for _ in range(n)))
    return {a: random_rational(rng, den=den) for a in sorted(pts)}


def random_rational_point(rng: random.Random, n: int, den: int = 7):
    return tuple(random_rational(rng, 10, den) for _ in range(n))


def quadratic_roots(a0: complex, a1: complex, a2: complex):
    """Roots of ``a0 + a1 z + a2 z^2`` by the stable quadratic formula."""
    disc = np.sqrt(complex(a1) ** 2 - 4 * a0 * a2)
    q = -0.5 * (a1 + (disc if (np.conj(a1) * disc).real >= 0 else -disc))
    return np.array([q / a2, a0 / q])


def normalized_volume(points) -> float:
    """``d! * vol`` of the convex hull via scipy; 0 for lower-dimensional input."""
    from scipy.spatial import ConvexHull

    P = np.array(points, dtype=float)
    rank = np.linalg.matrix_rank(P - P[0]) if len(P) > 1 else 0
    if rank < P.shape[1]:
        return 0.0
    return math.factorial(P.shape[1]) * ConvexHull(P).volume


def simplex_normalized_volume(points) -> int:
    P = np.array(points[1:], dtype=object) - np.array(points[0], dtype=object)
    return abs(int(sympy.Matrix(P.tolist()).det()))


def random_plane_polynomial_terms(rng: random.Random, max_terms: int = 10):
    """Bivariate support of size <= ``max_terms`` with rational valuations of denominator <= 20."""
    return random_polynomial_terms(rng, 2, max_terms, box=3, den=20)


def on_piece_exact(x, start, direction, end=None) -> bool:
    """Exact membership of a rational point in a ray (``end`` None) or a segment."""
    d = direction
    rel = [xi - si for xi, si in zip(x, start)]
    if any(rel[i] * d[j] != rel[j] * d[i] for i in range(len(d)) for j in range(len(d))):
        return False
    mu = sum(r * di for r, di in zip(rel, d))
    if mu < 0:
        return False
    if end is None:
        return True
    return mu <= sum((e - s) * di for e, s, di in zip(end, start, d))
