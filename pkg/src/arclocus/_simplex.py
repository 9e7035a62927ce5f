"""Exact rational linear programming.

Two-phase primal simplex over ``fractions.Fraction`` with Bland's rule,
which guarantees termination.  The instances solved here are tiny (a few
dozen rows and columns), so a dense tableau is entirely adequate.  The
library bans floating point, which rules out scipy's solvers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

LE, GE, EQ = "<=", ">=", "=="


@dataclass
class LpResult:
    status: str
    value: Optional[Fraction] = None
    point: Optional[list] = None  # values of the user variables


@dataclass
class LinearProgram:
    """A small builder for min c.x subject to linear rows and bounds.

    Variables are created with ``add_variable`` and referenced by index.
    Lower bounds must be finite rationals (or None for a free variable);
    upper bounds are optional.
    """

    _lo: list = field(default_factory=list)
    _hi: list = field(default_factory=list)
    _rows: list = field(default_factory=list)  # (coeff dict, rel, rhs)
    _objective: dict = field(default_factory=dict)
    _obj_const: Fraction = Fraction(0)

    def add_variable(self, lo=Fraction(0), hi=None) -> int:
        self._lo.append(None if lo is None else Fraction(lo))
        self._hi.append(None if hi is None else Fraction(hi))
        return len(self._lo) - 1

    def add_constraint(self, coeffs: dict, rel: str, rhs) -> None:
        assert rel in (LE, GE, EQ)
        self._rows.append(({int(j): Fraction(v) for j, v in coeffs.items() if v},
                           rel, Fraction(rhs)))

    def set_objective(self, coeffs: dict, constant=Fraction(0)) -> None:
        self._objective = {int(j): Fraction(v) for j, v in coeffs.items() if v}
        self._obj_const = Fraction(constant)

    # -- standard-form conversion and solve ----------------------------

    def solve(self) -> LpResult:
        nuser = len(self._lo)
        # Column layout: one column per bounded variable (shifted by its
        # lower bound), two columns (pos, neg) per free variable.
        col_of = []  # per user var: ("shift", col, lo) or ("free", cpos, cneg)
        ncols = 0
        for j in range(nuser):
            if self._lo[j] is None:
                col_of.append(("free", ncols, ncols + 1))
                ncols += 2
            else:
                col_of.append(("shift", ncols, self._lo[j]))
                ncols += 1

        rows = []  # (dense coeffs, rel, rhs) over the ncols columns
        def convert_row(coeffs, rel, rhs):
            dense = [Fraction(0)] * ncols
            r = Fraction(rhs)
            for j, v in coeffs.items():
                spec = col_of[j]
                if spec[0] == "free":
                    dense[spec[1]] += v
                    dense[spec[2]] -= v
                else:
                    dense[spec[1]] += v
                    r -= v * spec[2]
            return dense, rel, r

        for coeffs, rel, rhs in self._rows:
            rows.append(convert_row(coeffs, rel, rhs))
        for j in range(nuser):
            if self._hi[j] is not None:
                rows.append(convert_row({j: Fraction(1)}, LE, self._hi[j]))

        # Slacks turn every row into an equality with rhs >= 0.
        nslack = sum(1 for _, rel, _ in rows if rel != EQ)
        total = ncols + nslack
        A, b = [], []
        si = ncols
        for dense, rel, rhs in rows:
            row = dense + [Fraction(0)] * nslack
            if rel == LE:
                row[si] = Fraction(1)
                si += 1
            elif rel == GE:
                row[si] = Fraction(-1)
                si += 1
            if rhs < 0:
                row = [-v for v in row]
                rhs = -rhs
            A.append(row)
            b.append(rhs)

        cost = [Fraction(0)] * total
        for j, v in self._objective.items():
            spec = col_of[j]
            if spec[0] == "free":
                cost[spec[1]] += v
                cost[spec[2]] -= v
            else:
                cost[spec[1]] += v
        obj_shift = self._obj_const + sum(
            self._objective.get(j, Fraction(0)) * self._lo[j]
            for j in range(nuser) if self._lo[j] is not None)

        status, x = _two_phase(A, b, cost)
        if status != OPTIMAL:
            return LpResult(status)
        point = []
        for j in range(nuser):
            spec = col_of[j]
            if spec[0] == "free":
                point.append(x[spec[1]] - x[spec[2]])
            else:
                point.append(x[spec[1]] + spec[2])
        value = obj_shift + sum(cost[j] * x[j] for j in range(total))
        return LpResult(OPTIMAL, value, point)


# -- tableau machinery -------------------------------------------------

def _pivot(rows, basis, r, c):
    prow = rows[r]
    inv = Fraction(1) / prow[c]
    rows[r] = [v * inv for v in prow]
    for i in range(len(rows)):
        if i != r and rows[i][c]:
            f = rows[i][c]
            rows[i] = [a - f * p for a, p in zip(rows[i], rows[r])]
    basis[r] = c


def _reduced_costs(rows, basis, cost):
    n = len(cost)
    rc = list(cost)
    for i, bvar in enumerate(basis):
        cb = cost[bvar]
        if cb:
            row = rows[i]
            rc = [rc[j] - cb * row[j] for j in range(n)]
    return rc


def _simplex(rows, basis, cost):
    """Run primal simplex with Bland's rule.  rows carry rhs in last slot."""
    n = len(cost)
    while True:
        rc = _reduced_costs(rows, basis, cost)
        enter = next((j for j in range(n) if rc[j] < 0), None)
        if enter is None:
            return OPTIMAL
        leave, best = None, None
        for i, row in enumerate(rows):
            if row[enter] > 0:
                t = row[-1] / row[enter]
                if best is None or t < best or (t == best and basis[i] < basis[leave]):
                    best, leave = t, i
        if leave is None:
            return UNBOUNDED
        _pivot(rows, basis, leave, enter)


def _two_phase(A, b, cost):
    m, n = len(A), len(cost)
    # Phase 1: artificial variables with unit cost.
    rows = [A[i] + [Fraction(0)] * m + [b[i]] for i in range(m)]
    for i in range(m):
        rows[i][n + i] = Fraction(1)
    basis = [n + i for i in range(m)]
    cost1 = [Fraction(0)] * n + [Fraction(1)] * m
    _simplex(rows, basis, cost1)
    val1 = sum(cost1[basis[i]] * rows[i][-1] for i in range(m))
    if val1 != 0:
        return INFEASIBLE, None
    # Drive remaining artificials out of the basis; drop redundant rows.
    keep = []
    for i in range(m):
        if basis[i] >= n:
            piv = next((j for j in range(n) if rows[i][j] != 0), None)
            if piv is None:
                continue  # redundant row
            _pivot(rows, basis, i, piv)
        keep.append(i)
    rows = [rows[i][:n] + [rows[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    status = _simplex(rows, basis, list(cost))
    if status != OPTIMAL:
        return status, None
    x = [Fraction(0)] * n
    for i, bvar in enumerate(basis):
        x[bvar] = rows[i][-1]
    return OPTIMAL, x
