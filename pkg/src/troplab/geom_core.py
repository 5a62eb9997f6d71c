"""Exact rational primitives shared by the combinatorial modules.

Points are tuples of :class:`fractions.Fraction`; integer directions are
tuples of ``int``. Floats only show up in the distance kernels at the bottom
of this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import DegeneratePiece, ZeroVector
from .lp import linprog_exact

__all__ = [
    "to_fraction",
    "rational_point",
    "dot",
    "primitive_vector",
    "primitive_from_rational",
    "RelintResult",
    "relint_contains_origin",
    "rank",
    "nullspace",
    "solve_particular",
    "affine_frame",
    "facets",
    "faces",
    "Segment",
    "Ray",
    "distance_point_to_piece",
    "squared_distance_exact",
]

Number = Union[int, Fraction, str, float]


def to_fraction(x: Number) -> Fraction:
    """Parse an int, Fraction, float (taken exactly) or ``"p/q"`` string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, float)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def rational_point(coords: Iterable[Number]) -> tuple:
    pt = tuple(to_fraction(c) for c in coords)
    if not pt:
        raise ValueError("points need at least one coordinate")
    return pt


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def primitive_vector(v: Sequence[int]) -> tuple:
    """Divide an integer vector by the gcd of its entries.

    >>> primitive_vector((-3, 6, 9))
    (-1, 2, 3)
    """
    v = tuple(int(x) for x in v)
    g = math.gcd(*v) if v else 0
    if g == 0:
        raise ZeroVector(f"{v} has no nonzero component")
    return tuple(x // g for x in v)


def primitive_from_rational(v: Sequence) -> tuple:
    """Primitive integer vector parallel to (and oriented like) a rational vector."""
    fr = [to_fraction(x) for x in v]
    den = math.lcm(*(x.denominator for x in fr)) if fr else 1
    return primitive_vector([int(x * den) for x in fr])


class RelintResult(NamedTuple):
    contains: bool
    witness: Optional[tuple]


def relint_contains_origin(dirs: Sequence[Sequence[int]]) -> RelintResult:
    """Decide whether 0 lies in the relative interior of ``conv(dirs)``.

    Feasibility of ``{w : w.v >= 0 for all v, sum(w.v) >= 1}`` is decided by
    exact simplex. When feasible, the returned witness is canonicalised: it is
    strictly positive on every direction that any witness can make positive,
    and among those it minimises the l1 norm; finally it is scaled to a
    primitive integer vector.
    """
    dirs = [tuple(int(x) for x in v) for v in dirs]
    if not dirs:
        raise ValueError("need at least one direction")
    n = len(dirs[0])
    if any(len(v) != n for v in dirs):
        raise ValueError("directions have different lengths")

    # phase one: is there a w with all w.v >= 0 and one strictly positive?
    A_ub = [[-x for x in v] for v in dirs]
    b_ub = [0] * len(dirs)
    total = [sum(v[i] for v in dirs) for i in range(n)]
    res = linprog_exact([0] * n, A_ub + [[-x for x in total]], b_ub + [-1], free=range(n))
    if not res.feasible:
        return RelintResult(True, None)

    # which directions can be made strictly positive: maximise sum of s_v in [0,1]
    m = len(dirs)
    A = []
    for k, v in enumerate(dirs):
        row = [-x for x in v] + [0] * m
        row[n + k] = 1
        A.append(row)
    for k in range(m):
        row = [0] * (n + m)
        row[n + k] = 1
        A.append(row)
    res = linprog_exact([0] * n + [-1] * m, A, [0] * m + [1] * m, free=range(n))
    strict = [res.x[n + k] == 1 for k in range(m)]

    # l1-minimal w with w.v >= 1 on the strict set and w.v = 0 elsewhere
    A_ub = [[-x for x in v] + [0] * n for v, s in zip(dirs, strict) if s]
    b_ub = [-1] * len(A_ub)
    A_eq = [list(v) + [0] * n for v, s in zip(dirs, strict) if not s]
    for i in range(n):
        pos = [0] * (2 * n)
        pos[i], pos[n + i] = 1, -1
        neg = [0] * (2 * n)
        neg[i], neg[n + i] = -1, -1
        A_ub += [pos, neg]
        b_ub += [0, 0]
    res = linprog_exact([0] * n + [1] * n, A_ub, b_ub, A_eq or None, [0] * len(A_eq), free=range(n))
    witness = primitive_from_rational(res.x[:n])
    return RelintResult(False, witness)


# --- exact linear algebra -------------------------------------------------


def _rref(rows):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    M = [[to_fraction(x) for x in r] for r in rows]
    pivots = []
    if not M:
        return M, pivots
    ncols = len(M[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [x / piv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(rows) -> int:
    return len(_rref(rows)[1])


def nullspace(rows, ncols: Optional[int] = None) -> list:
    """Basis of ``{x : rows @ x = 0}`` as lists of Fractions."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    M, pivots = _rref(rows)
    ncols = len(M[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -M[r][f]
        basis.append(x)
    return basis


def solve_particular(rows, rhs) -> Optional[list]:
    """One exact solution of ``rows @ x = rhs`` (free variables set to 0), or None."""
    aug = [list(r) + [rv] for r, rv in zip(rows, rhs)]
    M, pivots = _rref(aug)
    ncols = len(aug[0]) - 1
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = M[r][ncols]
    return x


def affine_frame(points):
    """Affine coordinates of ``points`` inside their affine span.

    Returns ``(dim, coords)`` where ``coords[i]`` is a tuple of length ``dim``
    with ``points[i] = points[0] + sum(coords[i][k] * basis[k])`` for a basis
    chosen among the differences ``points[j] - points[0]``.
    """
    pts = [tuple(to_fraction(x) for x in p) for p in points]
    base = pts[0]
    diffs = [tuple(a - b for a, b in zip(p, base)) for p in pts]
    basis = []
    for d in diffs:
        if rank(basis + [d]) > len(basis):
            basis.append(d)
    dim = len(basis)
    if dim == 0:
        return 0, [() for _ in pts]
    # solve basis^T y = d for each difference
    cols = [[basis[k][i] for k in range(dim)] for i in range(len(base))]
    coords = []
    for d in diffs:
        y = solve_particular(cols, d)
        coords.append(tuple(y))
    return dim, coords


def facets(points) -> list:
    """Facets of ``conv(points)`` relative to its affine span, as index sets.

    Exhaustive over affinely independent subsets; intended for the small
    configurations (at most a few dozen points, dimension <= 4) used here.
    A 0-dimensional configuration has no facets.
    """
    dim, coords = affine_frame(points)
    if dim == 0:
        return []
    found = []
    seen = set()
    idx = range(len(coords))
    for sub in combinations(idx, dim):
        if any(set(sub) <= f for f in seen):
            continue
        base = coords[sub[0]]
        diffs = [[a - b for a, b in zip(coords[j], base)] for j in sub[1:]]
        if diffs and rank(diffs) < dim - 1:
            continue
        ns = nullspace(diffs, dim) if diffs else [[Fraction(1)]]
        if len(ns) != 1:
            continue
        normal = ns[0]
        level = dot(normal, base)
        vals = [dot(normal, c) - level for c in coords]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            face = frozenset(i for i, v in zip(idx, vals) if v == 0)
            if face not in seen:
                seen.add(face)
                found.append(face)
    return found


def faces(points) -> list:
    """All nonempty faces of ``conv(points)`` (including itself), as index sets."""
    pts = list(points)
    result = {frozenset(range(len(pts)))}
    stack = [tuple(range(len(pts)))]
    while stack:
        sub = stack.pop()
        for f in facets([pts[i] for i in sub]):
            face = frozenset(sub[i] for i in f)
            if face not in result:
                result.add(face)
                stack.append(tuple(sorted(face)))
    return sorted(result, key=lambda f: (len(f), sorted(f)))


# --- distances ----------------------------------------------------------------


@dataclass(frozen=True)
class Segment:
    start: tuple
    end: tuple


@dataclass(frozen=True)
class Ray:
    start: tuple
    direction: tuple


Piece = Union[Segment, Ray]


def _piece_arrays(piece: Piece):
    p = np.asarray([float(x) for x in piece.start])
    if isinstance(piece, Segment):
        d = np.asarray([float(x) for x in piece.end]) - p
        hi = 1.0
    else:
        d = np.asarray([float(x) for x in piece.direction])
        hi = np.inf
    dd = float(d @ d)
    if dd == 0.0:
        raise DegeneratePiece(f"degenerate piece {piece}")
    return p, d, dd, hi


def distance_point_to_piece(x, piece: Piece) -> float:
    """Euclidean distance from ``x`` to a closed segment or ray."""
    p, d, dd, hi = _piece_arrays(piece)
    x = np.asarray(x, dtype=float)
    lam = min(max(float((x - p) @ d) / dd, 0.0), hi)
    return float(np.linalg.norm(x - (p + lam * d)))


def distances_to_piece(X, piece: Piece) -> np.ndarray:
    """Vectorised :func:`distance_point_to_piece` over the rows of ``X``."""
    p, d, dd, hi = _piece_arrays(piece)
    X = np.asarray(X, dtype=float)
    lam = np.clip((X - p) @ d / dd, 0.0, hi)
    return np.linalg.norm(X - (p + lam[:, None] * d), axis=1)


def squared_distance_exact(x, piece: Piece) -> Fraction:
    """Exact squared distance from a rational point to a rational piece."""
    x = rational_point(x)
    p = rational_point(piece.start)
    if isinstance(piece, Segment):
        d = tuple(a - b for a, b in zip(rational_point(piece.end), p))
    else:
        d = rational_point(piece.direction)
    dd = dot(d, d)
    if dd == 0:
        raise DegeneratePiece(f"degenerate piece {piece}")
    lam = dot([a - b for a, b in zip(x, p)], d) / dd
    lam = max(lam, Fraction(0))
    if isinstance(piece, Segment):
        lam = min(lam, Fraction(1))
    foot = [a + lam * b for a, b in zip(p, d)]
    return sum(((a - b) ** 2 for a, b in zip(x, foot)), Fraction(0))
