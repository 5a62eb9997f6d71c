"""Exact rational linear programming.

A small two-phase tableau simplex over :class:`fractions.Fraction` using
Bland's rule, so it terminates on degenerate problems and returns exact
vertices. Problem sizes in this package are tiny (tens of rows), so a dense
tableau is fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

__all__ = ["LPResult", "linprog_exact"]


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: Optional[tuple]
    fun: Optional[Fraction]

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


class _Tableau:
    """Rows are constraints ``sum(A[i][j] x_j) = b[i]`` with one basic variable each."""

    def __init__(self, A, b, basis):
        self.A = A
        self.b = b
        self.basis = basis

    def pivot(self, r, c):
        A, b = self.A, self.b
        piv = A[r][c]
        row = [v / piv for v in A[r]]
        A[r] = row
        b[r] = b[r] / piv
        for i in range(len(A)):
            if i == r:
                continue
            f = A[i][c]
            if f:
                Ai = A[i]
                for j, v in enumerate(row):
                    if v:
                        Ai[j] -= f * v
                b[i] -= f * b[r]
        self.basis[r] = c

    def reduced_costs(self, cost):
        rc = list(cost)
        for i, bv in enumerate(self.basis):
            cb = cost[bv]
            if cb:
                for j, v in enumerate(self.A[i]):
                    if v:
                        rc[j] -= cb * v
        return rc

    def minimize(self, cost, allowed):
        """Run primal simplex with Bland's rule; columns outside ``allowed`` never enter."""
        while True:
            rc = self.reduced_costs(cost)
            entering = next((j for j in range(len(rc)) if allowed[j] and rc[j] < 0), None)
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.A):
                a = row[entering]
                if a > 0:
                    ratio = self.b[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)


def _as_fractions(rows):
    return [[Fraction(v) for v in row] for row in rows]


def linprog_exact(
    c: Sequence,
    A_ub: Optional[Sequence[Sequence]] = None,
    b_ub: Optional[Sequence] = None,
    A_eq: Optional[Sequence[Sequence]] = None,
    b_eq: Optional[Sequence] = None,
    free: Optional[Sequence[int]] = None,
) -> LPResult:
    """Minimize ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x == b_eq``.

    Variables are nonnegative except those listed in ``free``. All data are
    converted to :class:`~fractions.Fraction`; the solution is exact.
    """
    nvar = len(c)
    A_ub = _as_fractions(A_ub or [])
    A_eq = _as_fractions(A_eq or [])
    b_ub = [Fraction(v) for v in (b_ub or [])]
    b_eq = [Fraction(v) for v in (b_eq or [])]
    if len(A_ub) != len(b_ub) or len(A_eq) != len(b_eq):
        raise ValueError("constraint matrix and right-hand side lengths differ")
    for row in A_ub + A_eq:
        if len(row) != nvar:
            raise ValueError("constraint row has wrong length")
    free = sorted(set(free or ()))

    # column layout: original vars, negative parts of free vars, slacks, artificials
    neg_col = {j: nvar + k for k, j in enumerate(free)}
    nstruct = nvar + len(free)
    nslack = len(A_ub)
    nrows = len(A_ub) + len(A_eq)
    ncols = nstruct + nslack + nrows

    A, b = [], []
    for i, (row, rhs) in enumerate(list(zip(A_ub, b_ub)) + list(zip(A_eq, b_eq))):
        full = [Fraction(0)] * ncols
        for j, v in enumerate(row):
            full[j] = v
            if j in neg_col:
                full[neg_col[j]] = -v
        if i < nslack:
            full[nstruct + i] = Fraction(1)
        if rhs < 0:
            full = [-v for v in full]
            rhs = -rhs
        full[nstruct + nslack + i] = Fraction(1)
        A.append(full)
        b.append(rhs)

    art0 = nstruct + nslack
    tab = _Tableau(A, b, [art0 + i for i in range(nrows)])

    phase1 = [Fraction(0)] * ncols
    for i in range(nrows):
        phase1[art0 + i] = Fraction(1)
    tab.minimize(phase1, [True] * ncols)
    if sum(tab.b[i] for i, bv in enumerate(tab.basis) if bv >= art0) > 0:
        return LPResult("infeasible", None, None)

    # drive zero-level artificials out of the basis where possible
    for i in range(nrows):
        if tab.basis[i] >= art0:
            col = next((j for j in range(art0) if tab.A[i][j] != 0), None)
            if col is not None:
                tab.pivot(i, col)

    cost = [Fraction(0)] * ncols
    for j, v in enumerate(c):
        cost[j] = Fraction(v)
        if j in neg_col:
            cost[neg_col[j]] = -Fraction(v)
    allowed = [j < art0 for j in range(ncols)]
    if tab.minimize(cost, allowed) == "unbounded":
        return LPResult("unbounded", None, None)

    values = [Fraction(0)] * ncols
    for i, bv in enumerate(tab.basis):
        values[bv] = tab.b[i]
    x = [values[j] for j in range(nvar)]
    for j, k in neg_col.items():
        x[j] -= values[k]
    fun = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult("optimal", tuple(x), fun)
