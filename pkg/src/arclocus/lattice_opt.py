"""Exact minimization of linear and piecewise-linear objectives over
lattice points of rational polyhedra.

This is the computational kernel behind every codimension and mld
formula in the library.  Two problem shapes are supported:

* ``LatticeProgram``: a rational linear objective over nu in N^s subject
  to equality and >= rows with nonnegative integer coefficients, a
  support condition (the support of nu must belong to a subset-closed
  family) and an optional hit condition (the support must meet a given
  index set).

* ``PiecewiseProgram``: a rational linear part minus a nonnegative
  combination of min-of-linear-forms terms, minimized over w in N^d with
  prescribed strictly positive coordinates and order rows of the shape
  "min over a form list >= rhs".

Everything is exact.  Unboundedness (-inf) is decided exactly, never by
sampling: for lattice programs via the free recession directions of each
support cone, for piecewise programs via the exact minimum of the
1-homogeneous objective over the standard simplex (a rational LP).
Infeasible programs return +inf.  Witnesses are the lexicographically
smallest optimal vectors, which keeps golden outputs deterministic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from ._simplex import EQ, GE, OPTIMAL, UNBOUNDED, LinearProgram
from .errors import BudgetError, InputError
from .extended import NEG_INF, POS_INF, ExtendedRational, frac

Vector = tuple[int, ...]

_DEFAULT_SEARCH_LIMIT = 10_000_000
_MAX_DEEPENING_BOX = 1 << 14


def _as_nat_vector(v: Sequence[int], length: int, what: str) -> Vector:
    out = tuple(int(x) for x in v)
    if len(out) != length:
        raise InputError(f"{what}: expected length {length}, got {len(out)}")
    if any(x < 0 for x in out) or any(x != y for x, y in zip(out, v)):
        raise InputError(f"{what}: entries must be nonnegative integers")
    return out


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _ceil_frac(x: Fraction) -> int:
    return _ceil_div(x.numerator, x.denominator)


# ----------------------------------------------------------------------
# Lattice programs
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeProgram:
    """min objective . nu over nu in N^s with support-side conditions.

    ``admissible_supports`` is a subset-closed family of subsets of
    range(s); None means every support is admissible.  When
    ``required_hit`` is nonempty, feasible nu must have at least one
    positive coordinate inside it.
    """

    objective: tuple[Fraction, ...]
    eq_rows: tuple[tuple[Vector, int], ...] = ()
    ge_rows: tuple[tuple[Vector, int], ...] = ()
    admissible_supports: Optional[frozenset[frozenset[int]]] = None
    required_hit: frozenset[int] = frozenset()

    @property
    def s(self) -> int:
        return len(self.objective)

    @staticmethod
    def make(objective, eq_rows=(), ge_rows=(), admissible_supports=None,
             required_hit=()) -> "LatticeProgram":
        obj = tuple(frac(c) for c in objective)
        s = len(obj)
        eqs = tuple((_as_nat_vector(row, s, "eq row"), int(rhs)) for row, rhs in eq_rows)
        ges = tuple((_as_nat_vector(row, s, "ge row"), int(rhs)) for row, rhs in ge_rows)
        for _, rhs in itertools.chain(eqs, ges):
            if rhs < 0:
                raise InputError("constraint right-hand sides must be nonnegative")
        supports = None
        if admissible_supports is not None:
            supports = frozenset(frozenset(int(j) for j in S) for S in admissible_supports)
            for S in supports:
                if any(j < 0 or j >= s for j in S):
                    raise InputError("support index out of range")
                for j in S:
                    if S - {j} not in supports:
                        raise InputError("admissible_supports is not closed under subsets")
            if supports and frozenset() not in supports:
                raise InputError("admissible_supports must contain the empty set")
        hit = frozenset(int(j) for j in required_hit)
        if any(j < 0 or j >= s for j in hit):
            raise InputError("required_hit index out of range")
        return LatticeProgram(obj, eqs, ges, supports, hit)


def _maximal_supports(p: LatticeProgram) -> list[frozenset[int]]:
    if p.admissible_supports is None:
        return [frozenset(range(p.s))]
    fam = p.admissible_supports
    return sorted((S for S in fam if not any(S < T for T in fam)),
                  key=lambda S: sorted(S))


class _PieceSolver:
    """One support cone, with an optional coordinate forced >= 1.

    Within the cone every coordinate has a complete search bound: an
    equality row caps each variable it touches, and the lexicographically
    least optimum never pushes an equality-free variable beyond what some
    >= row demands (lowering such a coordinate keeps every equality row
    intact, so only a >= row can pin it).
    """

    def __init__(self, p: LatticeProgram, support: frozenset[int],
                 hit_var: Optional[int]):
        self.p = p
        self.active = sorted(support)
        self.hit_var = hit_var
        s = p.s
        base = [0] * s
        if hit_var is not None:
            base[hit_var] = 1
        self.base = tuple(base)
        self.infeasible = False
        self.eq: list[tuple[Vector, int]] = []
        for row, rhs in p.eq_rows:
            r = rhs - sum(row[j] * base[j] for j in range(s))
            if r < 0 or (r > 0 and all(row[j] == 0 for j in self.active)):
                self.infeasible = True
                return
            self.eq.append((row, r))
        self.ge: list[tuple[Vector, int]] = []
        for row, rhs in p.ge_rows:
            r = max(0, rhs - sum(row[j] * base[j] for j in range(s)))
            if r > 0 and all(row[j] == 0 for j in self.active):
                self.infeasible = True
                return
            self.ge.append((row, r))
        self.free = [j for j in self.active
                     if all(row[j] == 0 for row, _ in self.eq)]
        self.bounds: dict[int, int] = {}
        for j in self.active:
            eq_caps = [rhs // row[j] for row, rhs in self.eq if row[j] > 0]
            if eq_caps:
                self.bounds[j] = min(eq_caps)
            else:
                needs = [_ceil_div(rhs, row[j])
                         for row, rhs in self.ge if row[j] > 0 and rhs > 0]
                self.bounds[j] = max(needs, default=0)

    def negative_free_direction(self) -> Optional[int]:
        for j in self.free:
            if self.p.objective[j] < 0:
                return j
        return None

    def has_feasible_point(self) -> bool:
        # Equality-free variables only ever help >= rows; parking them at
        # their caps satisfies every row they can serve.
        fixed = {j: self.bounds[j] for j in self.free}
        return self._search(track_cost=False, prefixed=fixed) is not None

    def minimize(self) -> Optional[tuple[Fraction, Vector]]:
        res = self._search(track_cost=True, prefixed={})
        if res is None:
            return None
        value, point = res
        full = list(self.base)
        for j, v in point.items():
            full[j] += v
        if self.hit_var is not None:
            value += self.p.objective[self.hit_var]
        return value, tuple(full)

    def _search(self, track_cost: bool, prefixed: dict[int, int]):
        order = [j for j in self.active if j not in prefixed]
        obj = self.p.objective
        eq, ge = self.eq, self.ge
        neq, nge = len(eq), len(ge)

        # Residual capacity of the tail variables, per row, per depth.
        eq_caps = [[sum(row[j] * self.bounds[j] for j in order[i:])
                    for row, _ in eq] for i in range(len(order) + 1)]
        ge_caps = [[sum(row[j] * self.bounds[j] for j in order[i:])
                    for row, _ in ge] for i in range(len(order) + 1)]
        neg_tail = [sum(min(Fraction(0), obj[j] * self.bounds[j])
                        for j in order[i:]) for i in range(len(order) + 1)]

        eq_left0 = [rhs - sum(row[j] * prefixed[j] for j in prefixed)
                    for row, rhs in eq]
        ge_left0 = [rhs - sum(row[j] * prefixed[j] for j in prefixed)
                    for row, rhs in ge]
        if any(v < 0 for v in eq_left0):
            return None
        cost0 = sum((obj[j] * prefixed[j] for j in prefixed), Fraction(0))

        best: list = [None, None]
        assignment: dict[int, int] = {}

        def rec(idx: int, eq_left, ge_left, cost):
            for i in range(neq):
                if eq_left[i] > eq_caps[idx][i]:
                    return
            for i in range(nge):
                if ge_left[i] > ge_caps[idx][i]:
                    return
            if track_cost and best[0] is not None and cost + neg_tail[idx] >= best[0]:
                return
            if idx == len(order):
                if all(v == 0 for v in eq_left):
                    point = dict(prefixed)
                    point.update(assignment)
                    best[0] = cost if track_cost else Fraction(0)
                    best[1] = point
                return
            j = order[idx]
            for v in range(self.bounds[j] + 1):
                new_eq = [eq_left[i] - eq[i][0][j] * v for i in range(neq)]
                if any(x < 0 for x in new_eq):
                    break
                new_ge = [ge_left[i] - ge[i][0][j] * v for i in range(nge)]
                assignment[j] = v
                rec(idx + 1, new_eq, new_ge, cost + obj[j] * v)
                if not track_cost and best[0] is not None:
                    break
            assignment.pop(j, None)

        rec(0, eq_left0, ge_left0, cost0)
        if best[0] is None:
            return None
        return best[0], best[1]


def minimize_lattice(p: LatticeProgram) -> tuple[ExtendedRational, Optional[Vector]]:
    """Exact minimum of a LatticeProgram, with a lex-least witness.

    Returns +inf when infeasible and -inf exactly when some support cone
    contains a feasible point together with a free coordinate direction
    of negative cost.
    """
    if not isinstance(p, LatticeProgram):
        raise InputError("minimize_lattice expects a LatticeProgram")
    if p.s == 0:
        ok = all(rhs == 0 for _, rhs in p.eq_rows + p.ge_rows) and not p.required_hit
        return (ExtendedRational.of(0), ()) if ok else (POS_INF, None)

    pieces = []
    for S in _maximal_supports(p):
        if p.required_hit:
            pieces.extend((S, j) for j in sorted(p.required_hit & S))
        else:
            pieces.append((S, None))

    best_val: Optional[Fraction] = None
    best_wit: Optional[Vector] = None
    for S, hit_var in pieces:
        piece = _PieceSolver(p, S, hit_var)
        if piece.infeasible:
            continue
        if piece.negative_free_direction() is not None and piece.has_feasible_point():
            return NEG_INF, None
        res = piece.minimize()
        if res is None:
            continue
        value, wit = res
        if best_val is None or value < best_val or \
                (value == best_val and wit < best_wit):
            best_val, best_wit = value, wit

    if best_val is None:
        return POS_INF, None
    _assert_lattice_witness(p, best_val, best_wit)
    return ExtendedRational.of(best_val), best_wit


def _assert_lattice_witness(p: LatticeProgram, value: Fraction, nu: Vector) -> None:
    assert sum(c * v for c, v in zip(p.objective, nu)) == value
    for row, rhs in p.eq_rows:
        assert sum(a * v for a, v in zip(row, nu)) == rhs
    for row, rhs in p.ge_rows:
        assert sum(a * v for a, v in zip(row, nu)) >= rhs
    supp = frozenset(j for j, v in enumerate(nu) if v)
    if p.admissible_supports is not None:
        assert supp in p.admissible_supports
    if p.required_hit:
        assert supp & p.required_hit


# ----------------------------------------------------------------------
# Piecewise programs
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PiecewiseProgram:
    """min linear_part . w - sum_t coeff_t * min(form . w over forms_t)
    over w in N^d, subject to w_j >= 1 on ``strict_positive`` and, for
    every order row, min over its forms of form . w >= rhs.

    Min-term coefficients must be nonnegative: they are boundary
    multiplicities, and their sign is what makes the objective convex and
    the finiteness certificate exact.
    """

    linear_part: tuple[Fraction, ...]
    min_terms: tuple[tuple[Fraction, tuple[Vector, ...]], ...] = ()
    strict_positive: frozenset[int] = frozenset()
    ge_order_rows: tuple[tuple[tuple[Vector, ...], int], ...] = ()

    @property
    def d(self) -> int:
        return len(self.linear_part)

    @staticmethod
    def make(linear_part, min_terms=(), strict_positive=(), ge_order_rows=()):
        lin = tuple(frac(c) for c in linear_part)
        d = len(lin)
        terms = []
        for coeff, forms in min_terms:
            c = frac(coeff)
            if c < 0:
                raise InputError("min-term coefficients must be nonnegative")
            fl = tuple(_as_nat_vector(u, d, "min-term form") for u in forms)
            if not fl:
                raise InputError("min-term form list must be nonempty")
            terms.append((c, fl))
        sp = frozenset(int(j) for j in strict_positive)
        if any(j < 0 or j >= d for j in sp):
            raise InputError("strict_positive index out of range")
        rows = []
        for forms, rhs in ge_order_rows:
            fl = tuple(_as_nat_vector(u, d, "order-row form") for u in forms)
            if not fl:
                raise InputError("order-row form list must be nonempty")
            if int(rhs) < 0:
                raise InputError("order-row rhs must be a natural number")
            rows.append((fl, int(rhs)))
        return PiecewiseProgram(lin, tuple(terms), sp, tuple(rows))

    def value_at(self, w: Sequence[int]) -> Fraction:
        v = sum((c * x for c, x in zip(self.linear_part, w)), Fraction(0))
        for coeff, forms in self.min_terms:
            v -= coeff * min(sum(u[j] * w[j] for j in range(self.d)) for u in forms)
        return v

    def is_feasible(self, w: Sequence[int]) -> bool:
        if len(w) != self.d or any(x < 0 for x in w):
            return False
        if any(w[j] < 1 for j in self.strict_positive):
            return False
        for forms, rhs in self.ge_order_rows:
            if min(sum(u[j] * w[j] for j in range(self.d)) for u in forms) < rhs:
                return False
        return True


@dataclass
class PiecewiseSolution:
    value: ExtendedRational
    witness: Optional[Vector]
    # When the value is -inf: an integral direction with negative
    # objective, and its (negative) objective value.
    negative_direction: Optional[Vector] = None
    negative_value: Optional[Fraction] = None


def _objective_lp(p: PiecewiseProgram, lp: LinearProgram, wvars: list[int]) -> dict:
    """Epigraph encoding of the objective: one free variable per min
    term, constrained to t >= -form.w, entering the cost with the term's
    coefficient."""
    obj = {wvars[j]: p.linear_part[j] for j in range(p.d)}
    for coeff, forms in p.min_terms:
        t = lp.add_variable(lo=None)
        for u in forms:
            row = {wvars[j]: Fraction(u[j]) for j in range(p.d) if u[j]}
            row[t] = Fraction(1)
            lp.add_constraint(row, GE, Fraction(0))
        obj[t] = coeff
    return obj


def _simplex_min(p: PiecewiseProgram) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Exact minimum of the 1-homogeneous objective over the standard
    simplex, with an argmin.  Negative iff the objective is negative
    somewhere on the orthant."""
    lp = LinearProgram()
    wvars = [lp.add_variable(lo=Fraction(0)) for _ in range(p.d)]
    lp.add_constraint({j: Fraction(1) for j in wvars}, EQ, Fraction(1))
    lp.set_objective(_objective_lp(p, lp, wvars))
    res = lp.solve()
    assert res.status == OPTIMAL  # the simplex is compact
    return res.value, tuple(res.point[j] for j in wvars)


def _region_lower_bound(p: PiecewiseProgram, big: frozenset[int],
                        box: int) -> Optional[Fraction]:
    """Exact continuous minimum of the objective over the feasible points
    with w_j >= box+1 for j in ``big`` and w_j <= box elsewhere, or None
    when that region is empty."""
    lp = LinearProgram()
    wvars = []
    for j in range(p.d):
        lo = Fraction(1) if j in p.strict_positive else Fraction(0)
        if j in big:
            wvars.append(lp.add_variable(lo=max(lo, Fraction(box + 1))))
        else:
            wvars.append(lp.add_variable(lo=lo, hi=Fraction(box)))
    for forms, rhs in p.ge_order_rows:
        for u in forms:
            lp.add_constraint({wvars[j]: Fraction(u[j]) for j in range(p.d) if u[j]},
                              GE, Fraction(rhs))
    lp.set_objective(_objective_lp(p, lp, wvars))
    res = lp.solve()
    if res.status == UNBOUNDED:
        raise AssertionError("region LP unbounded although the objective "
                             "is nonnegative on the orthant")
    return res.value if res.status == OPTIMAL else None


def _box_search(p: PiecewiseProgram, lo: Vector, hi: int, limit: int):
    """Exhaustive lex-ordered DFS over the box prod [lo_j, hi] with exact
    feasibility and objective-bound pruning.  Returns (value, witness) of
    the box minimum or None."""
    d = p.d
    nodes = 1
    for j in range(d):
        nodes *= hi - lo[j] + 1
    if nodes > limit:
        raise BudgetError(
            f"piecewise search box of {nodes} points exceeds the limit {limit}",
            required=nodes)

    best: list = [None, None]
    w = [0] * d

    def dead_row(idx: int) -> bool:
        for forms, rhs in p.ge_order_rows:
            for u in forms:
                reach = sum(u[j] * w[j] for j in range(idx)) + \
                    sum(u[j] * hi for j in range(idx, d))
                if reach < rhs:
                    return True
        return False

    def obj_lower_bound(idx: int) -> Fraction:
        v = sum((p.linear_part[j] * w[j] for j in range(idx)), Fraction(0))
        for j in range(idx, d):
            c = p.linear_part[j]
            v += min(c * lo[j], c * hi)
        for coeff, forms in p.min_terms:
            cap = min(sum(u[j] * w[j] for j in range(idx)) +
                      sum(u[j] * hi for j in range(idx, d)) for u in forms)
            v -= coeff * cap
        return v

    def rec(idx: int):
        if dead_row(idx):
            return
        if best[0] is not None and obj_lower_bound(idx) >= best[0]:
            return
        if idx == d:
            if p.is_feasible(w):
                val = p.value_at(w)
                if best[0] is None or val < best[0]:
                    best[0], best[1] = val, tuple(w)
            return
        for v in range(lo[idx], hi + 1):
            w[idx] = v
            rec(idx + 1)
        w[idx] = lo[idx]

    rec(0)
    return (best[0], best[1]) if best[0] is not None else None


def solve_piecewise(p: PiecewiseProgram,
                    search_limit: int = _DEFAULT_SEARCH_LIMIT) -> PiecewiseSolution:
    """Full solution record for a PiecewiseProgram; see minimize_piecewise."""
    if not isinstance(p, PiecewiseProgram):
        raise InputError("expected a PiecewiseProgram")
    d = p.d
    if d == 0:
        return PiecewiseSolution(ExtendedRational.of(0), ())

    # A zero form inside an order row pins that row's min at 0.
    for forms, rhs in p.ge_order_rows:
        if rhs > 0 and any(not any(u) for u in forms):
            return PiecewiseSolution(POS_INF, None)

    eps, direction = _simplex_min(p)
    if eps < 0:
        den = math.lcm(*(x.denominator for x in direction))
        ray = tuple(int(x * den) for x in direction)
        g = math.gcd(*ray)
        ray = tuple(x // g for x in ray)
        return PiecewiseSolution(NEG_INF, None, ray, p.value_at(ray))

    lo = tuple(1 if j in p.strict_positive else 0 for j in range(d))
    start = 1
    for forms, rhs in p.ge_order_rows:
        if rhs > 0:
            start = max(start, _ceil_div(rhs, min(sum(u) for u in forms)))
    w0 = tuple(max(lo[j], start) for j in range(d))
    assert p.is_feasible(w0)
    upper = p.value_at(w0)

    if eps > 0:
        # Outside the box the 1-homogeneous objective exceeds eps * box,
        # which is beyond the known upper bound: the box is certified.
        box = max(max(w0), _ceil_frac(upper / eps))
        res = _box_search(p, lo, box, search_limit)
        assert res is not None
        value, wit = res
        _assert_piecewise_witness(p, value, wit)
        return PiecewiseSolution(ExtendedRational.of(value), wit)

    # eps == 0: the objective is nonnegative on the orthant but flat along
    # some ray.  Deepen the box until exact LP lower bounds on every
    # outside region certify the box minimum.  Objective values at
    # lattice points are multiples of 1/D, so each LP bound rounds up to
    # that grid before the comparison.
    denom = math.lcm(*[c.denominator for c in p.linear_part],
                     *[c.denominator for c, _ in p.min_terms] or [1])
    box = max(max(w0), 2)
    while box <= _MAX_DEEPENING_BOX:
        res = _box_search(p, lo, box, search_limit)
        if res is not None:
            value, wit = res
            certified = True
            for size in range(1, d + 1):
                for big in itertools.combinations(range(d), size):
                    lb = _region_lower_bound(p, frozenset(big), box)
                    if lb is None:
                        continue
                    lb = Fraction(_ceil_frac(lb * denom), denom)
                    if lb < value:
                        certified = False
                        break
                if not certified:
                    break
            if certified:
                _assert_piecewise_witness(p, value, wit)
                return PiecewiseSolution(ExtendedRational.of(value), wit)
        box *= 2
    raise BudgetError("piecewise deepening exceeded the box limit "
                      f"{_MAX_DEEPENING_BOX}", required=2 * _MAX_DEEPENING_BOX)


def minimize_piecewise(p: PiecewiseProgram,
                       search_limit: int = _DEFAULT_SEARCH_LIMIT
                       ) -> tuple[ExtendedRational, Optional[Vector]]:
    """Exact infimum of a PiecewiseProgram over the lattice.

    Returns (-inf, None) exactly when the homogeneous objective takes a
    negative value somewhere on the orthant: the feasible set is closed
    under adding lattice vectors, so any negative direction drags the
    infimum down.  Returns (+inf, None) when infeasible.  Otherwise the
    minimum is attained; the witness is the lexicographically least
    optimum of the certified search box.
    """
    sol = solve_piecewise(p, search_limit=search_limit)
    return sol.value, sol.witness


def _assert_piecewise_witness(p: PiecewiseProgram, value: Fraction, w: Vector) -> None:
    assert p.is_feasible(w)
    assert p.value_at(w) == value
