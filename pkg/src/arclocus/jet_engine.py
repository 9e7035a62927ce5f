"""Ground truth by brute force.

This module turns a hypersurface equation into truncated jet equations,
counts their solutions over small prime fields to measure dimensions of
jet schemes and contact loci, lifts approximate jets to higher order by
the gradient-driven recursion, and classifies hypersurface singularities
by combining the Newton weight bound with jet-level evidence.

Conventions: jets of level m in d variables live in d*(m+1) coordinates
x_j^(l) (coordinate j, t-power l), flattened as index l*d + j.  Orders
measured on level-m data are capped at m+1, which acts as the "at least
m+1" sentinel.  Dimensions over finite fields are read off from point
counts via balanced base-p digits, cross-checked over several primes;
this is exact precisely on instances whose counts are polynomials in p
with coefficients below p/2 in absolute value, which each curated
instance asserts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import (BudgetError, DisagreementError, InputError,
                     LiftingObstructionError)
from .extended import NEG_INF, ExtendedRational, frac
from .monomial_arcs import (CenterSpec, MonomialIdeal, NewtonHypersurface,
                            nondegenerate_hypersurface_mld)

DEFAULT_BUDGET = 10 ** 8
_CHUNK = 1 << 19


# ----------------------------------------------------------------------
# Exact multivariate polynomials over Q or F_p
# ----------------------------------------------------------------------

class Poly:
    """A polynomial in ``nvars`` variables over Q (field=None) or F_p.

    Coefficients are Fractions over Q and canonical residues in [0, p)
    over F_p.  Terms map exponent tuples to nonzero coefficients.
    """

    __slots__ = ("nvars", "terms", "field")

    def __init__(self, nvars: int, terms: dict, field: Optional[int] = None):
        self.nvars = int(nvars)
        self.field = field
        clean = {}
        for exp, coeff in terms.items():
            e = tuple(int(x) for x in exp)
            if len(e) != self.nvars or any(x < 0 for x in e):
                raise InputError("bad exponent vector in polynomial")
            c = self._coerce(coeff)
            if c:
                clean[e] = clean.get(e, self._zero_c()) + c
                if field is not None:
                    clean[e] %= field
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    def _coerce(self, c):
        if self.field is None:
            return frac(c) if not isinstance(c, Fraction) else c
        if isinstance(c, Fraction):
            num, den = c.numerator, c.denominator
            if den % self.field == 0:
                raise InputError(f"denominator {den} not invertible mod {self.field}")
            return num * pow(den, -1, self.field) % self.field
        return int(c) % self.field

    def _zero_c(self):
        return Fraction(0) if self.field is None else 0

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(nvars: int, field=None) -> "Poly":
        return Poly(nvars, {}, field)

    @staticmethod
    def constant(nvars: int, c, field=None) -> "Poly":
        return Poly(nvars, {(0,) * nvars: c}, field)

    @staticmethod
    def variable(nvars: int, v: int, field=None) -> "Poly":
        exp = [0] * nvars
        exp[v] = 1
        return Poly(nvars, {tuple(exp): 1}, field)

    # -- structure ------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def support(self) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(self.terms))

    def __eq__(self, other):
        return isinstance(other, Poly) and self.nvars == other.nvars and \
            self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.field, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Poly({self.nvars} vars, {len(self.terms)} terms, field={self.field})"

    # -- arithmetic -------------------------------------------------------

    def _check_compat(self, other: "Poly"):
        if self.nvars != other.nvars or self.field != other.field:
            raise InputError("polynomial arithmetic across different rings")

    def __add__(self, other: "Poly") -> "Poly":
        self._check_compat(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, self._zero_c()) + c
        return Poly(self.nvars, out, self.field)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()}, self.field)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: Union["Poly", int, Fraction]) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(self.nvars,
                        {e: c * self._coerce(other) for e, c in self.terms.items()},
                        self.field)
        self._check_compat(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, self._zero_c()) + c1 * c2
        return Poly(self.nvars, out, self.field)

    __rmul__ = __mul__

    def partial(self, v: int) -> "Poly":
        out: dict = {}
        for e, c in self.terms.items():
            if e[v]:
                de = list(e)
                de[v] -= 1
                out[tuple(de)] = out.get(tuple(de), self._zero_c()) + c * e[v]
        return Poly(self.nvars, out, self.field)

    def reduce_mod(self, p: int) -> "Poly":
        if self.field is not None:
            if self.field != p:
                raise InputError(f"polynomial already lives over F_{self.field}")
            return self
        return Poly(self.nvars, dict(self.terms), p)

    def eval_scalar(self, point: Sequence):
        total = self._zero_c()
        for e, c in self.terms.items():
            v = c
            for j, ex in enumerate(e):
                for _ in range(ex):
                    v = v * point[j]
            total = total + v
        return total % self.field if self.field is not None else total


def poly_from_support(d: int, support: Sequence[Sequence[int]],
                      field=None) -> Poly:
    """The unit-coefficient polynomial with the given exponent support."""
    return Poly(d, {tuple(int(x) for x in u): 1 for u in support}, field)


# ----------------------------------------------------------------------
# Exact polynomials in t (dense coefficient lists)
# ----------------------------------------------------------------------

def _tp_normalize(a: list, field) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _tp_add(a: list, b: list, field) -> list:
    n = max(len(a), len(b))
    zero = 0 if field is not None else Fraction(0)
    out = []
    for i in range(n):
        x = (a[i] if i < len(a) else zero) + (b[i] if i < len(b) else zero)
        out.append(x % field if field is not None else x)
    return _tp_normalize(out, field)


def _tp_mul(a: list, b: list, field, trunc: Optional[int] = None) -> list:
    if not a or not b:
        return []
    n = len(a) + len(b) - 1
    if trunc is not None:
        n = min(n, trunc + 1)
    zero = 0 if field is not None else Fraction(0)
    out = [zero] * n
    for i, x in enumerate(a):
        if not x or i >= n:
            continue
        for j, y in enumerate(b):
            if i + j >= n:
                break
            out[i + j] += x * y
    if field is not None:
        out = [v % field for v in out]
    return _tp_normalize(out, field)


def _tp_ord(a: list) -> Optional[int]:
    for i, x in enumerate(a):
        if x:
            return i
    return None  # the zero polynomial: order infinity


def _eval_at_tpolys(f: Poly, coords: list[list], field,
                    trunc: Optional[int] = None) -> list:
    """Evaluate f at a tuple of t-polynomials, exactly (or truncated)."""
    zero = 0 if field is not None else Fraction(0)
    acc: list = []
    pow_cache: dict = {}

    def coord_power(j, e):
        if e == 0:
            return [1 if field is not None else Fraction(1)]
        key = (j, e)
        if key not in pow_cache:
            half = coord_power(j, e - 1)
            pow_cache[key] = _tp_mul(half, coords[j], field, trunc)
        return pow_cache[key]

    for exp, coeff in f.terms.items():
        term = [coeff]
        for j, e in enumerate(exp):
            if e:
                term = _tp_mul(term, coord_power(j, e), field, trunc)
        acc = _tp_add(acc, term, field)
    if trunc is not None:
        acc = _tp_normalize(acc[:trunc + 1], field)
    return acc


# ----------------------------------------------------------------------
# Jet systems
# ----------------------------------------------------------------------

def jet_index(d: int, j: int, level: int) -> int:
    """Flat index of the jet variable x_j^(level)."""
    return level * d + j


@dataclass(frozen=True)
class JetSystem:
    """The equations of the level-m jet scheme of a hypersurface: the
    coefficients of t^0..t^m of f applied to a truncated coordinate
    substitution.  ``equations`` may be empty for ambient jet space."""

    d: int
    m: int
    equations: tuple[Poly, ...]
    field: Optional[int] = None

    @property
    def nvars(self) -> int:
        return self.d * (self.m + 1)

    @staticmethod
    def ambient(d: int, m: int, field=None) -> "JetSystem":
        if d < 1 or m < 0:
            raise InputError("need d >= 1 and m >= 0")
        return JetSystem(d, m, (), field)


def jet_equations(f: Poly, m: int) -> JetSystem:
    """Expand f(sum_l x_j^(l) t^l) modulo t^(m+1); the coefficient of t^l
    is the l-th jet equation, a weighted-homogeneous polynomial of degree
    l when x_j^(l) carries weight l."""
    if f.is_zero:
        raise InputError("jet equations of the zero polynomial are undefined")
    if m < 0:
        raise InputError("jet level must be a natural number")
    d = f.nvars
    n = d * (m + 1)
    # Coordinate j becomes the polynomial-coefficient series
    # [x_j^(0), ..., x_j^(m)].
    coords = [[Poly.variable(n, jet_index(d, j, l), f.field)
               for l in range(m + 1)] for j in range(d)]
    zero = Poly.zero(n, f.field)
    series = [zero] * (m + 1)

    def series_mul(a, b):
        out = [zero] * (m + 1)
        for i, x in enumerate(a):
            if x.is_zero:
                continue
            for jj in range(m + 1 - i):
                if not b[jj].is_zero:
                    out[i + jj] = out[i + jj] + x * b[jj]
        return out

    pow_cache: dict = {}

    def coord_power(j, e):
        if e == 0:
            return None
        if (j, e) not in pow_cache:
            if e == 1:
                pow_cache[(j, e)] = coords[j] + [zero] * 0
            else:
                pow_cache[(j, e)] = series_mul(coord_power(j, e - 1), coords[j])
        return pow_cache[(j, e)]

    for exp, coeff in f.terms.items():
        term = [Poly.constant(n, coeff, f.field)] + [zero] * m
        for j, e in enumerate(exp):
            if e:
                term = series_mul(term, coord_power(j, e))
        series = [a + b for a, b in zip(series, term)]
    return JetSystem(d, m, tuple(series), f.field)


# ----------------------------------------------------------------------
# Truncated arcs
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class TruncatedArc:
    """A d-tuple of power series truncated at the stated order, over Q or
    a prime field; series[j][l] is the t^l coefficient of coordinate j."""

    order: int
    series: tuple[tuple, ...]
    field: Optional[int] = None

    @property
    def d(self) -> int:
        return len(self.series)

    @staticmethod
    def make(order: int, series, field=None) -> "TruncatedArc":
        order = int(order)
        if order < 0:
            raise InputError("arc truncation order must be >= 0")
        rows = []
        for coord in series:
            row = [frac(c) if field is None else int(c) % field for c in coord]
            if len(row) != order + 1:
                raise InputError("each coordinate needs exactly order+1 coefficients")
            rows.append(tuple(row))
        if not rows:
            raise InputError("an arc needs at least one coordinate")
        return TruncatedArc(order, tuple(rows), field)

    def coordinate_tpolys(self) -> list[list]:
        return [list(row) for row in self.series]


# ----------------------------------------------------------------------
# Contact queries and exhaustive counting
# ----------------------------------------------------------------------

class Relation(str, Enum):
    EXACT = "exact"
    AT_LEAST = "at_least"


@dataclass(frozen=True)
class ContactQuery:
    """Order conditions on the coordinates of a jet: each constraint is
    (monomial ideal or polynomial, relation, order); the optional base
    point condition restricts where the jet starts."""

    constraints: tuple[tuple[object, Relation, int], ...] = ()
    base_point: Optional[CenterSpec] = None

    @staticmethod
    def make(constraints=(), base_point=None) -> "ContactQuery":
        rows = []
        for obj, rel, order in constraints:
            rel = Relation(rel)
            order = int(order)
            if order < 0:
                raise InputError("contact orders must be natural numbers")
            if not isinstance(obj, (MonomialIdeal, Poly)):
                raise InputError("constraint subject must be a MonomialIdeal or Poly")
            rows.append((obj, rel, order))
        return ContactQuery(tuple(rows), base_point)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _next_primes(start: int, count: int) -> list[int]:
    out = []
    p = max(3, start)
    if p % 2 == 0:
        p += 1
    while len(out) < count:
        if _is_prime(p):
            out.append(p)
        p += 2
    return out


class _BlockVars:
    """Digit arrays for a block of the enumeration grid.  Fixed variables
    are scalars; inner variables vary along the block; outer variables
    are per-block scalars."""

    def __init__(self, p, free, inner_k, inner_digits, fixed):
        self.p = p
        self.free = free
        self.inner_k = inner_k
        self.inner_digits = inner_digits
        self.fixed = fixed
        self.outer_value = 0

    def set_outer(self, outer: int):
        self.outer_value = outer

    def get(self, v: int):
        if v in self.fixed:
            return self.fixed[v]
        i = self.free.index(v)
        if i < self.inner_k:
            return self.inner_digits[i]
        return (self.outer_value // self.p ** (i - self.inner_k)) % self.p


def _np_eval_poly(poly: Poly, vars_: _BlockVars, p: int):
    acc = 0
    for exp, coeff in poly.terms.items():
        term = int(coeff) % p
        for v, e in enumerate(exp):
            if e:
                base = vars_.get(v)
                for _ in range(e):
                    term = (term * base) % p
        acc = (acc + term) % p
    return acc


def _np_series_eval(g: Poly, coord_series: list[list], p: int, L: int):
    """Evaluate g at per-coordinate lists of digit arrays, truncated at
    t^L; returns the list of coefficient arrays of t^0..t^L."""
    def ser_mul(a, b):
        out = [0] * (L + 1)
        for i in range(L + 1):
            if isinstance(a[i], int) and a[i] == 0:
                continue
            for j in range(L + 1 - i):
                if isinstance(b[j], int) and b[j] == 0:
                    continue
                out[i + j] = (out[i + j] + a[i] * b[j]) % p
        return out

    pow_cache: dict = {}

    def coord_power(j, e):
        if e == 1:
            return coord_series[j]
        if (j, e) not in pow_cache:
            pow_cache[(j, e)] = ser_mul(coord_power(j, e - 1), coord_series[j])
        return pow_cache[(j, e)]

    acc = [0] * (L + 1)
    for exp, coeff in g.terms.items():
        term = [0] * (L + 1)
        term[0] = int(coeff) % p
        for j, e in enumerate(exp):
            if e:
                term = ser_mul(term, coord_power(j, e))
        for i in range(L + 1):
            acc[i] = (acc[i] + term[i]) % p
    return acc


def _np_first_nonzero_order(series_coeffs, L: int):
    """Order of a coefficient-array series: index of the first nonzero
    coefficient, with L+1 standing for 'vanishes through t^L'."""
    ord_arr = None
    for l in range(L, -1, -1):
        nz = series_coeffs[l] != 0 if not isinstance(series_coeffs[l], int) \
            else np.asarray(series_coeffs[l] != 0)
        if ord_arr is None:
            ord_arr = np.where(nz, l, L + 1)
        else:
            ord_arr = np.where(nz, l, ord_arr)
    return ord_arr


def count_jet_points(system: JetSystem, p: int,
                     query: Optional[ContactQuery] = None,
                     budget: int = DEFAULT_BUDGET) -> int:
    """Exact number of F_p-points of the jet scheme satisfying the query,
    by blocked exhaustive enumeration of the jet coordinate space."""
    if not _is_prime(p):
        raise InputError(f"{p} is not prime")
    if system.field is not None and system.field != p:
        raise InputError(f"system lives over F_{system.field}, not F_{p}")
    d, m = system.d, system.m
    query = query or ContactQuery()
    for obj, rel, order in query.constraints:
        cap = m if rel == Relation.EXACT else m + 1
        if order > cap:
            raise InputError(
                f"constraint order {order} exceeds what level-{m} jets "
                f"determine (max {cap} for {rel.value})")
        if isinstance(obj, MonomialIdeal) and obj.d != d:
            raise InputError("constraint ideal dimension mismatch")
        if isinstance(obj, Poly) and obj.nvars != d:
            raise InputError("constraint polynomial dimension mismatch")
    if query.base_point is not None:
        query.base_point.validate(d)

    equations = [eq.reduce_mod(p) for eq in system.equations]
    constraints = [(obj.reduce_mod(p) if isinstance(obj, Poly) else obj, rel, o)
                   for obj, rel, o in query.constraints]

    fixed: dict[int, int] = {}
    if query.base_point is not None and query.base_point.kind == "subspace":
        for j in query.base_point.coords:
            fixed[jet_index(d, j, 0)] = 0

    n = d * (m + 1)
    free = [v for v in range(n) if v not in fixed]
    total = p ** len(free)
    if total > budget:
        raise BudgetError(
            f"enumerating {total} jet points exceeds the budget {budget}; "
            f"rerun with budget >= {total}", required=total)

    inner_k = 0
    while inner_k < len(free) and p ** (inner_k + 1) <= _CHUNK:
        inner_k += 1
    inner_size = p ** inner_k
    base = np.arange(inner_size, dtype=np.int64)
    inner_digits = [(base // p ** i) % p for i in range(inner_k)]
    vars_ = _BlockVars(p, free, inner_k, inner_digits, fixed)
    outer_total = p ** (len(free) - inner_k)

    count = 0
    for outer in range(outer_total):
        vars_.set_outer(outer)
        mask = np.ones(inner_size, dtype=bool)
        for eq in equations:
            if not mask.any():
                break
            mask &= (_np_eval_poly(eq, vars_, p) == 0)
        if mask.any() and (constraints or False):
            coord_ords = None
            coord_series = None
            for obj, rel, order in constraints:
                if isinstance(obj, MonomialIdeal):
                    if coord_ords is None:
                        coord_ords = []
                        for j in range(d):
                            series = [vars_.get(jet_index(d, j, l))
                                      for l in range(m + 1)]
                            coord_ords.append(_np_first_nonzero_order(series, m))
                    sentinel = m + 1
                    ideal_ord = None
                    for gen in obj.generators:
                        tot = 0
                        for j, u in enumerate(gen):
                            if u:
                                tot = tot + u * coord_ords[j]
                        tot = np.minimum(tot, sentinel) if not isinstance(tot, int) \
                            else min(tot, sentinel)
                        ideal_ord = tot if ideal_ord is None else \
                            np.minimum(ideal_ord, tot)
                    val = ideal_ord
                else:
                    if coord_series is None:
                        coord_series = [[vars_.get(jet_index(d, j, l))
                                         for l in range(m + 1)] for j in range(d)]
                    coeffs = _np_series_eval(obj, coord_series, p, m)
                    val = _np_first_nonzero_order(coeffs, m)
                mask &= (val == order) if rel == Relation.EXACT else (val >= order)
        count += int(np.count_nonzero(mask))
    return count


# ----------------------------------------------------------------------
# Dimension measurement by balanced-digit interpolation
# ----------------------------------------------------------------------

def balanced_digits(n: int, p: int) -> list[int]:
    """Digits of n in balanced base p (each in (-p/2, p/2)), little
    endian.  Unique, so a polynomial count with small coefficients can be
    decoded from its value at a single prime."""
    if n < 0:
        raise InputError("counts are nonnegative")
    digits = []
    while n:
        r = n % p
        if r > p // 2:
            r -= p
        digits.append(r)
        n = (n - r) // p
    return digits


def _decode_counts(counts: dict[int, int], max_degree: int) -> list[int]:
    """Common coefficient vector of the counts across primes, or raise."""
    vectors = {p: balanced_digits(c, p) for p, c in counts.items()}
    first = None
    for p, vec in sorted(vectors.items()):
        if len(vec) - 1 > max_degree:
            raise InputError(
                f"count {counts[p]} at p={p} decodes to degree {len(vec) - 1} "
                f"> {max_degree}: not polynomial-count on this instance")
        if first is None:
            first = vec
        elif vec != first:
            raise InputError(
                "counts are not consistent with a single low-coefficient "
                f"polynomial across the supplied primes: {vectors}")
    return first if first is not None else []


def empirical_codim(f: Optional[Poly], m: int, primes: Sequence[int],
                    query: Optional[ContactQuery] = None,
                    budget: int = DEFAULT_BUDGET) -> tuple[int, int]:
    """Measure (dim, codim in ambient jet space) of the level-m locus cut
    out by f's jet equations (ambient space when f is None) and the
    query, from exhaustive counts at several primes.

    Counts must decode to one and the same integer-coefficient polynomial
    in p across all primes; its degree is the dimension.
    """
    primes = [int(p) for p in primes]
    if len(set(primes)) < 3:
        raise InputError("need at least 3 distinct primes")
    for p in primes:
        if not _is_prime(p) or p == 2:
            raise InputError(f"{p} is not an odd prime")
    if f is not None and f.is_zero:
        raise InputError("f must be nonzero")
    d = f.nvars if f is not None else None
    counts = {}
    for p in primes:
        if f is not None:
            system = jet_equations(f.reduce_mod(p), m)
        else:
            raise InputError("ambient counting needs an explicit system; "
                             "pass f or use count_jet_points directly")
        counts[p] = count_jet_points(system, p, query, budget)
    return _dims_from_counts(counts, d, m)


def empirical_codim_ambient(d: int, m: int, primes: Sequence[int],
                            query: Optional[ContactQuery] = None,
                            budget: int = DEFAULT_BUDGET) -> tuple[int, int]:
    """Ambient-jet-space variant of empirical_codim (no equations)."""
    primes = [int(p) for p in primes]
    if len(set(primes)) < 3:
        raise InputError("need at least 3 distinct primes")
    counts = {p: count_jet_points(JetSystem.ambient(d, m), p, query, budget)
              for p in primes}
    return _dims_from_counts(counts, d, m)


def _dims_from_counts(counts: dict[int, int], d: int, m: int) -> tuple[int, int]:
    if all(c == 0 for c in counts.values()):
        raise InputError("empty point set: no dimension to measure")
    vec = _decode_counts(counts, d * (m + 1))
    dim = len(vec) - 1
    return dim, (m + 1) * d - dim


# ----------------------------------------------------------------------
# Newton lifting
# ----------------------------------------------------------------------

def newton_lift(f: Poly, arc: TruncatedArc, e: int, target: int) -> TruncatedArc:
    """Lift an approximate jet to a solution modulo t^(target+1).

    Preconditions (verified, with measured orders reported on failure):
    e <= truncation order m of the arc; f vanishes on the zero-extension
    to order at least m+e+1; the gradient vector has order exactly e.
    At each step the next coefficient vector solves one linear equation;
    determinism comes from supporting the solution on the first
    coordinate whose leading gradient coefficient is nonzero.
    """
    m = arc.order
    e = int(e)
    target = int(target)
    if e < 0 or e > m:
        raise InputError(f"need 0 <= e <= m, got e={e}, m={m}")
    if target < m:
        raise InputError("target order must be at least the arc order")
    field = arc.field
    if f.field is None and field is not None:
        f = f.reduce_mod(field)
    elif f.field != field:
        raise InputError("f and the arc live over different fields")
    if f.nvars != arc.d:
        raise InputError("f and the arc disagree on the number of coordinates")

    coords = arc.coordinate_tpolys()
    f0 = _eval_at_tpolys(f, coords, field)
    ord_f = _tp_ord(f0)
    if ord_f is not None and ord_f < m + e + 1:
        raise InputError(
            f"f(arc) has order {ord_f}, but lifting needs at least {m + e + 1}")

    partials = [f.partial(j) for j in range(arc.d)]
    grads = [_eval_at_tpolys(g, coords, field) for g in partials]
    grad_orders = [_tp_ord(g) for g in grads]
    finite = [o for o in grad_orders if o is not None]
    measured = min(finite) if finite else None
    if measured != e:
        msg = (f"gradient vector has order {measured}, expected {e} "
               f"(per-coordinate orders: {grad_orders})")
        if field is not None and (measured is None or measured > e):
            raise LiftingObstructionError(
                msg + f"; leading coefficients vanish in F_{field}")
        raise InputError(msg)
    lead = [g[e] if len(g) > e else (0 if field is not None else Fraction(0))
            for g in grads]
    j0 = next(j for j, c in enumerate(lead) if c)

    def divide(num, den):
        if field is None:
            return num / den
        return num * pow(den, -1, field) % field

    for n in range(max(0, target - m - e)):
        res = _eval_at_tpolys(f, coords, field)
        idx = m + e + 1 + n
        rho = res[idx] if len(res) > idx else (0 if field is not None else Fraction(0))
        if rho:
            v = divide(-rho, lead[j0]) if field is None else \
                divide((-rho) % field, lead[j0])
            row = coords[j0]
            pos = m + 1 + n
            while len(row) <= pos:
                row.append(0 if field is not None else Fraction(0))
            row[pos] = row[pos] + v
            if field is not None:
                row[pos] %= field

    out = []
    zero = 0 if field is not None else Fraction(0)
    for row in coords:
        padded = list(row[:target + 1]) + [zero] * (target + 1 - len(row[:target + 1]))
        out.append(padded)
    lifted = TruncatedArc.make(target, out, field)

    # Soundness of every successful lift, asserted on every call.
    res = _eval_at_tpolys(f, lifted.coordinate_tpolys(), field)
    final_ord = _tp_ord(res)
    assert final_ord is None or final_ord >= target + 1, \
        f"lift failed to reach order {target + 1}: residual order {final_ord}"
    for j in range(arc.d):
        assert lifted.series[j][:m + 1] == arc.series[j][:m + 1]
    return lifted


# ----------------------------------------------------------------------
# Fiber stability
# ----------------------------------------------------------------------

def check_fiber_stability(f: Poly, m: int, e: int, p: int,
                          budget: int = DEFAULT_BUDGET) -> bool:
    """Over F_p, check that (a) a level-(m+e) ambient jet belongs to the
    hypersurface jet scheme with singularity order exactly e if and only
    if its level-m truncation is the truncation of such a jet, and (b)
    every qualifying truncation Newton-lifts to order m+2e+1."""
    if e < 0 or e > m:
        raise InputError("need 0 <= e <= m")
    if not _is_prime(p):
        raise InputError(f"{p} is not prime")
    fp = f.reduce_mod(p)
    if fp.is_zero:
        raise InputError(f"f vanishes mod {p}")
    d = fp.nvars
    L = m + e
    total = p ** (d * (L + 1))
    if total > budget:
        raise BudgetError(f"fiber stability needs {total} evaluations "
                          f"(budget {budget})", required=total)
    partials = [fp.partial(j) for j in range(d)]

    def zorder(coords, cap):
        orders = []
        for g in partials:
            val = _eval_at_tpolys(g, coords, p, trunc=cap)
            o = _tp_ord(val)
            orders.append(cap + 1 if o is None else min(o, cap + 1))
        return min(orders)

    trunc_zord_cache: dict = {}
    member_of_dme: set = set()  # truncations in the image with Z-order e
    points = []
    for flat in itertools.product(range(p), repeat=d * (L + 1)):
        coords = [list(flat[j * (L + 1):(j + 1) * (L + 1)]) for j in range(d)]
        fval = _eval_at_tpolys(fp, coords, p, trunc=L)
        in_d = _tp_ord(fval) is None
        key = tuple(tuple(coords[j][:m + 1]) for j in range(d))
        in_b = in_d and zorder(coords, L) == e
        points.append((key, in_b))
        if in_d:
            if key not in trunc_zord_cache:
                trunc_zord_cache[key] = zorder([list(k) for k in key], m)
            if trunc_zord_cache[key] == e:
                member_of_dme.add(key)

    # (a) The preimage of the truncated locus is exactly the locus.
    for key, in_b in points:
        if (key in member_of_dme) != in_b:
            return False

    # (b) Every qualifying truncation lifts to order m + 2e + 1.
    for key in sorted(member_of_dme):
        arc = TruncatedArc.make(m, [list(k) for k in key], field=p)
        try:
            newton_lift(fp, arc, e, m + 2 * e + 1)
        except (InputError, LiftingObstructionError):
            return False
    return True


# ----------------------------------------------------------------------
# Hypersurface classification
# ----------------------------------------------------------------------

class SingularityClass(str, Enum):
    TERMINAL = "TERMINAL"
    CANONICAL_NOT_TERMINAL = "CANONICAL_NOT_TERMINAL"
    LC_NOT_CANONICAL = "LC_NOT_CANONICAL"
    NOT_LC = "NOT_LC"


@dataclass(frozen=True)
class JetEvidence:
    m: int
    primes: tuple[int, ...]
    dim: int
    expected_dim: int
    sing_dim: int
    pure_dimension: bool
    sing_codim: int


@dataclass(frozen=True)
class Classification:
    verdict: SingularityClass
    mu: Optional[ExtendedRational]  # Newton-route mld at the origin
    jets: tuple[JetEvidence, ...]
    methods: tuple[str, ...]
    # When the cross-prime polynomial-count check fails, the instance is
    # excluded from jet-counting oracle duty and the jets rows stop at
    # the failing level.
    jets_excluded: Optional[str] = None


def _newton_verdict(mu: ExtendedRational) -> SingularityClass:
    if mu == NEG_INF:
        return SingularityClass.NOT_LC
    if mu >= 2:
        return SingularityClass.TERMINAL
    if mu >= 1:
        return SingularityClass.CANONICAL_NOT_TERMINAL
    return SingularityClass.LC_NOT_CANONICAL


def _jets_verdict(rows: Sequence[JetEvidence]) -> SingularityClass:
    if any(not r.pure_dimension for r in rows):
        return SingularityClass.NOT_LC
    least = min(r.sing_codim for r in rows)
    if least >= 2:
        return SingularityClass.TERMINAL
    if least == 1:
        return SingularityClass.CANONICAL_NOT_TERMINAL
    return SingularityClass.LC_NOT_CANONICAL


def classify_hypersurface(h: NewtonHypersurface, method: str = "both",
                          jet_bound: int = 3, prime: int = 3,
                          f: Optional[Poly] = None,
                          budget: int = DEFAULT_BUDGET) -> Classification:
    """Classify an isolated hypersurface singularity at the origin.

    The Newton route computes the weight-vector mld mu of the pair
    (ambient, hypersurface) at the origin and thresholds it (the value is
    an integer for reduced data, so the cutoffs are exact).  The jets
    route measures, for levels up to ``jet_bound``, the dimension of the
    jet scheme (pure dimension at every level is the log canonical
    criterion) and of its singular locus, which is the jet preimage of
    the singular point; the codimension of that locus bounds how singular
    the hypersurface is.  Counting cannot certify irreducibility, so the
    jets route yields consistency evidence rather than proof; when both
    methods run, the Newton verdict is returned and any jets evidence
    that contradicts it raises DisagreementError.

    Counts use consecutive odd primes starting at ``prime``, keeping only
    those whose enumeration fits the budget (at least one must fit).
    When f is not supplied, the unit-coefficient polynomial with the
    hypersurface's support is used.  Instances whose counts fail the
    cross-prime polynomial-count check are excluded from jet oracle duty:
    the verdict then rests on the Newton route alone and the exclusion is
    recorded on the result.
    """
    if method not in ("newton", "jets", "both"):
        raise InputError(f"unknown method {method!r}")
    if not h.singular_locus_is_origin_asserted:
        raise InputError("classification requires "
                         "singular_locus_is_origin_asserted")
    if jet_bound < 0:
        raise InputError("jet_bound must be a natural number")

    mu = None
    if method in ("newton", "both"):
        mu = nondegenerate_hypersurface_mld(h, 1, CenterSpec.origin(h.d)).value

    rows: list[JetEvidence] = []
    excluded: Optional[str] = None
    if method in ("jets", "both"):
        fq = f if f is not None else poly_from_support(h.d, h.support)
        if fq.nvars != h.d:
            raise InputError("f does not match the hypersurface dimension")
        origin_query = ContactQuery.make(base_point=CenterSpec.origin(h.d))
        for m in range(jet_bound + 1):
            usable = [p for p in _next_primes(prime, 6)
                      if p ** (h.d * (m + 1)) <= budget][:3]
            if not usable:
                raise BudgetError(
                    f"no prime starting at {prime} fits level {m} in the "
                    f"budget {budget}")
            dim_counts, sing_counts = {}, {}
            for p in usable:
                system = jet_equations(fq.reduce_mod(p), m)
                dim_counts[p] = count_jet_points(system, p, budget=budget)
                sing_counts[p] = count_jet_points(system, p, origin_query,
                                                  budget=budget)
            try:
                dim, _ = _dims_from_counts(dim_counts, h.d, m)
                sing_dim, _ = _dims_from_counts(sing_counts, h.d, m)
            except InputError as exc:
                # The instance carries no polynomial-count guarantee:
                # exclude it from oracle duty rather than misread it.
                excluded = f"level {m}: {exc}"
                break
            expected = (m + 1) * (h.d - 1)
            rows.append(JetEvidence(m, tuple(usable), dim, expected, sing_dim,
                                    dim == expected, dim - sing_dim))

    if method == "newton":
        return Classification(_newton_verdict(mu), mu, (), ("newton",))
    if method == "jets":
        if excluded is not None:
            raise InputError("the jets method cannot classify this instance: "
                             + excluded)
        return Classification(_jets_verdict(rows), None, tuple(rows), ("jets",))

    verdict = _newton_verdict(mu)
    if excluded is not None:
        return Classification(verdict, mu, tuple(rows), ("newton", "jets"),
                              jets_excluded=excluded)
    pure_all = all(r.pure_dimension for r in rows)
    least_codim = min(r.sing_codim for r in rows)
    if verdict == SingularityClass.NOT_LC:
        if pure_all:
            raise DisagreementError(
                "Newton route says not log canonical, but every jet level up "
                f"to {jet_bound} has pure dimension")
    else:
        if not pure_all:
            raise DisagreementError(
                "Newton route says log canonical, but some jet level fails "
                "the pure-dimension criterion")
        if verdict == SingularityClass.TERMINAL and least_codim < 2:
            raise DisagreementError(
                f"Newton route says terminal, but the singular jet locus has "
                f"codimension {least_codim} < 2")
        if verdict == SingularityClass.CANONICAL_NOT_TERMINAL and least_codim < 1:
            raise DisagreementError(
                f"Newton route says canonical, but the singular jet locus has "
                f"codimension {least_codim} < 1")
    return Classification(verdict, mu, tuple(rows), ("newton", "jets"))
