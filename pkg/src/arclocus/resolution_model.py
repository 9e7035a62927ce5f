"""Numerical shadow of a log resolution and the formulas it supports.

``ResolutionData`` stores, for each exceptional-or-strict divisor D_j of
a simple normal crossings model: the coefficient k_j of the relative
canonical divisor, the multiplicities y_{i,j} of the pulled-back
subschemes Y_i, the multiplicities z_j of the pulled-back singularity
subscheme, the Gorenstein index r (so r*k_j is an integer) and the flags
recording how each divisor center sits relative to a chosen closed
subset W.  The intersection nerve lists which divisor subsets actually
meet, which is exactly the support condition of the lattice programs.

All divisor indices are 0-based.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import InputError
from .extended import NEG_INF, ExtendedRational, frac
from .lattice_opt import (LatticeProgram, _ceil_div, _ceil_frac,
                          minimize_lattice)

_SCAN_CHUNK = 1 << 21


@dataclass(frozen=True)
class ResolutionData:
    d: int                      # ambient dimension
    r: int                      # Gorenstein index: r*K is Cartier
    k: tuple[Fraction, ...]     # coefficients of the relative canonical divisor
    y: tuple[tuple[int, ...], ...]  # one row per subscheme Y_i, one column per divisor
    z: tuple[int, ...]
    in_w: tuple[bool, ...]      # center of D_j contained in W
    eq_w: tuple[bool, ...]      # center of D_j equal to W
    meets_w: tuple[bool, ...]   # center of D_j meets W
    nerve: frozenset[frozenset[int]]

    @property
    def s(self) -> int:
        return len(self.k)

    @property
    def k_ideals(self) -> int:
        return len(self.y)

    @staticmethod
    def make(d, r, k, y, z, in_w, eq_w=None, meets_w=None, nerve=None,
             s=None) -> "ResolutionData":
        d = int(d)
        r = int(r)
        if d < 1 or r < 1:
            raise InputError("ambient dimension and Gorenstein index must be >= 1")
        kv = tuple(frac(x) for x in k)
        ns = len(kv)
        if s is not None and int(s) != ns:
            raise InputError(f"s={s} disagrees with len(k)={ns}")
        for x in kv:
            if (r * x).denominator != 1:
                raise InputError(f"r*k_j must be integral, got k_j={x} with r={r}")
        rows = tuple(tuple(int(v) for v in row) for row in y)
        for row in rows:
            if len(row) != ns or any(v < 0 for v in row):
                raise InputError("y rows must be nonnegative integers of length s")
        zv = tuple(int(v) for v in z)
        if len(zv) != ns or any(v < 0 for v in zv):
            raise InputError("z must be a nonnegative integer vector of length s")

        def flags(v, name, default=None):
            if v is None:
                if default is None:
                    raise InputError(f"{name} is required")
                return default
            fv = tuple(bool(b) for b in v)
            if len(fv) != ns:
                raise InputError(f"{name} must have length s={ns}")
            return fv

        inw = flags(in_w, "in_w")
        eqw = flags(eq_w, "eq_w", default=tuple(False for _ in range(ns)))
        meets = flags(meets_w, "meets_w", default=tuple(True for _ in range(ns)))
        for j in range(ns):
            if eqw[j] and not inw[j]:
                raise InputError(f"divisor {j}: eq_w requires in_w")
            if inw[j] and not meets[j]:
                raise InputError(f"divisor {j}: in_w requires meets_w")
        if nerve is None:
            fam = frozenset(frozenset(c) for size in range(ns + 1)
                            for c in itertools.combinations(range(ns), size))
        else:
            fam = frozenset(frozenset(int(j) for j in S) for S in nerve)
            for S in fam:
                if any(j < 0 or j >= ns for j in S):
                    raise InputError("nerve index out of range")
                for j in S:
                    if S - {j} not in fam:
                        raise InputError("nerve is not closed under subsets")
            if frozenset() not in fam:
                raise InputError("nerve must contain the empty set")
            for j in range(ns):
                if frozenset([j]) not in fam:
                    raise InputError(f"nerve must contain the singleton {{{j}}}")
        return ResolutionData(d, r, kv, rows, zv, inw, eqw, meets, fam)


@dataclass(frozen=True)
class PairCoefficients:
    """The boundary multiplicities q_i of the pair, and whether the
    chosen subset W is a proper subset of the ambient space."""

    q: tuple[Fraction, ...]
    w_is_proper: bool = True

    @staticmethod
    def make(q, w_is_proper=True) -> "PairCoefficients":
        return PairCoefficients(tuple(frac(x) for x in q), bool(w_is_proper))


@dataclass(frozen=True)
class MldResult:
    value: ExtendedRational
    witness_divisor: Optional[int] = None


def log_discrepancy_coeffs(data: ResolutionData,
                           pair: PairCoefficients) -> tuple[Fraction, ...]:
    """a_j = k_j + 1 - sum_i q_i * y_{i,j}, exactly."""
    if len(pair.q) != data.k_ideals:
        raise InputError(f"pair has {len(pair.q)} coefficients but the data "
                         f"carries {data.k_ideals} subschemes")
    return tuple(
        data.k[j] + 1 - sum((q * data.y[i][j] for i, q in enumerate(pair.q)),
                            Fraction(0))
        for j in range(data.s))


def is_log_canonical(data: ResolutionData, pair: PairCoefficients) -> bool:
    return all(a >= 0 for a in log_discrepancy_coeffs(data, pair))


def _require_meets_w(data: ResolutionData) -> None:
    bad = [j for j in range(data.s) if not data.meets_w[j]]
    if bad:
        raise InputError(
            f"divisors {bad} do not meet W; restrict the model to a "
            "neighbourhood of W before computing mld")


def mld_on_w(data: ResolutionData, pair: PairCoefficients) -> MldResult:
    """Minimal log discrepancy on W: the least a_j over divisors with
    center inside W, demoted to -inf when the pair fails to be log
    canonical and the ambient dimension is at least 2.  In dimension 1
    the raw minimum is returned."""
    _require_meets_w(data)
    carriers = [j for j in range(data.s) if data.in_w[j]]
    if not carriers:
        raise InputError("W-data empty: no divisor center lies inside W")
    a = log_discrepancy_coeffs(data, pair)
    if any(x < 0 for x in a) and data.d >= 2:
        return MldResult(NEG_INF, None)
    j_best = min(carriers, key=lambda j: (a[j], j))
    return MldResult(ExtendedRational.of(a[j_best]), j_best)


def mld_at_generic_point(data: ResolutionData, pair: PairCoefficients) -> MldResult:
    """Least a_j over divisors whose center equals W, for log canonical
    pairs; by convention 0 when W is the whole space."""
    _require_meets_w(data)
    if not is_log_canonical(data, pair):
        raise InputError("pair is not log canonical; use mld_on_w instead")
    if not pair.w_is_proper:
        return MldResult(ExtendedRational.of(0), None)
    carriers = [j for j in range(data.s) if data.eq_w[j]]
    if not carriers:
        raise InputError("no divisor computes the generic point of W on this model")
    a = log_discrepancy_coeffs(data, pair)
    j_best = min(carriers, key=lambda j: (a[j], j))
    return MldResult(ExtendedRational.of(a[j_best]), j_best)


# ----------------------------------------------------------------------
# Contact-locus codimensions
# ----------------------------------------------------------------------

def _order_program(data: ResolutionData, m: Sequence[int], e: int,
                   w_is_proper: bool, exact: bool) -> LatticeProgram:
    mv = tuple(int(x) for x in m)
    if len(mv) != data.k_ideals or any(x < 0 for x in mv):
        raise InputError("m must be a natural vector, one entry per subscheme")
    if int(e) < 0:
        raise InputError("e must be a natural number")
    hit = [j for j in range(data.s) if data.in_w[j]] if w_is_proper else []
    rows = [(data.y[i], mv[i]) for i in range(data.k_ideals)]
    rows.append((data.z, int(e)))
    if exact:
        objective = [data.k[j] + 1 for j in range(data.s)]
        return LatticeProgram.make(objective, eq_rows=rows,
                                   admissible_supports=data.nerve,
                                   required_hit=hit)
    objective = [Fraction(data.z[j], data.r) + data.k[j] + 1 for j in range(data.s)]
    return LatticeProgram.make(objective, ge_rows=rows,
                               admissible_supports=data.nerve, required_hit=hit)


def contact_codim_exact(data: ResolutionData, m: Sequence[int], e: int,
                        w_is_proper: bool = True) -> ExtendedRational:
    """Codimension of the locus of arcs with orders exactly m along the
    Y_i and exactly e along the singularity subscheme, based over W:
    e/r plus the least sum of (k_j+1) nu_j over attaining nu."""
    value, _ = minimize_lattice(_order_program(data, m, e, w_is_proper, exact=True))
    if not value.is_finite:
        return value
    return value + Fraction(int(e), data.r)


def contact_codim_ge(data: ResolutionData, m: Sequence[int], e: int,
                     w_is_proper: bool = True) -> ExtendedRational:
    """Codimension of the locus of arcs with orders at least m and at
    least e: the least sum of (z_j/r + k_j + 1) nu_j over dominating nu."""
    value, _ = minimize_lattice(_order_program(data, m, e, w_is_proper, exact=False))
    return value


def classical_pair_codim(data: ResolutionData, e: int) -> ExtendedRational:
    """Divisor-pair variant: z is reinterpreted as the multiplicities of
    the boundary-adjusted subscheme T, and no auxiliary Y_i are allowed."""
    if data.k_ideals != 0:
        raise InputError("classical_pair_codim requires data with no Y subschemes")
    return contact_codim_exact(data, (), e, w_is_proper=True)


# ----------------------------------------------------------------------
# The finitely-many-(m, e) characterization check
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BoundCheckResult:
    verdict: bool
    box_m: tuple[int, ...]
    box_e: int
    counterexample: Optional[tuple[tuple[int, ...], int]] = None
    condition: Optional[str] = None  # "exact-order" or "min-order"


def _chunked_grids(caps: list[int]) -> Iterator[list[np.ndarray]]:
    """Yield the product grid over prod [0..cap_j] as column stacks of at
    most _SCAN_CHUNK points, keeping lexicographic order."""
    split = 0
    inner = 1
    for i in range(len(caps) - 1, -1, -1):
        if inner * (caps[i] + 1) > _SCAN_CHUNK:
            split = i + 1
            break
        inner *= caps[i] + 1
    outer_axes = [range(c + 1) for c in caps[:split]]
    inner_ranges = [np.arange(c + 1, dtype=np.int64) for c in caps[split:]]
    for outer in itertools.product(*outer_axes):
        if inner_ranges:
            grids = np.meshgrid(*inner_ranges, indexing="ij")
            cols = [np.full(grids[0].size, v, dtype=np.int64) for v in outer]
            cols.extend(g.ravel() for g in grids)
        else:
            cols = [np.array([v], dtype=np.int64) for v in outer]
        yield cols


def mld_bound_check(data: ResolutionData, pair: PairCoefficients,
                    tau) -> BoundCheckResult:
    """Check both codimension inequalities (the exact-order and the
    min-order variant) for every (m, e) in the finite box that the
    numerical data determines, at threshold tau.

    The box check is equivalent to quantifying over the attaining
    vectors nu, which is how the scan is implemented: a violation at
    some (m, e) in the box is witnessed by a vector nu with y.nu = m and
    z.nu = e whose cost undercuts the bound, and conversely.  Free
    coordinates (zero column in y and z) and negative min-order
    objective coefficients are handled by a pre-pass, after which
    per-coordinate caps make the scan finite and complete.
    """
    tau = frac(tau)
    if tau < 0:
        raise InputError("tau must be nonnegative")
    if not pair.w_is_proper:
        raise InputError("mld_bound_check requires W to be a proper subset")
    if any(q < 0 for q in pair.q):
        raise InputError("the min-order condition requires q_i >= 0")
    _require_meets_w(data)
    if not any(data.in_w):
        raise InputError("W-data empty: no divisor center lies inside W")
    if len(pair.q) != data.k_ideals:
        raise InputError("q length disagrees with the number of subschemes")

    s, kk = data.s, data.k_ideals
    denoms = [q.denominator for q in pair.q] + [data.r, tau.denominator]
    Q = math.lcm(*denoms)
    worst = max(abs(data.k[j] + 1) +
                sum((pair.q[i] * data.y[i][j] for i in range(kk)), Fraction(0)) +
                abs(tau) for j in range(s))
    alpha = _ceil_frac(Q * worst) + 1
    box_m = tuple(max(data.y[i][j] * alpha + data.y[i][j2]
                      for j in range(s) for j2 in range(s)) for i in range(kk))
    box_e = max(data.z[j] * alpha + data.z[j2]
                for j in range(s) for j2 in range(s))

    # Everything is compared after scaling by L, which clears all
    # denominators: L*(k_j+1), L*q_i, L*tau and L/r are integers.
    L = math.lcm(Q, data.r)
    c_exact = [int(L * (data.k[j] + 1)) for j in range(s)]
    c_ge = [int(L * (Fraction(data.z[j], data.r) + data.k[j] + 1)) for j in range(s)]
    Lq = [int(L * q) for q in pair.q]
    Ltau = int(L * tau)
    Lr = L // data.r
    sat_bound = Lr * box_e + sum(Lq[i] * box_m[i] for i in range(kk)) + Ltau

    def companion(j):
        if data.in_w[j]:
            return None
        cands = [j2 for j2 in range(s)
                 if data.in_w[j2] and frozenset([j, j2]) in data.nerve]
        return cands[0] if cands else False  # False: j cannot appear at all

    # Pre-pass.  A coordinate whose cost is negative while (m, e) stays
    # put (exact variant: zero y and z column) or saturates the box (min
    # variant) yields a violation at an explicitly constructible (m, e).
    for j in range(s):
        j2 = companion(j)
        if j2 is False:
            continue
        free_col = all(data.y[i][j] == 0 for i in range(kk)) and data.z[j] == 0
        base_cost_exact = 0 if j2 is None else c_exact[j2]
        base_m = tuple(0 if j2 is None else data.y[i][j2] for i in range(kk))
        base_e = 0 if j2 is None else data.z[j2]
        if free_col and c_exact[j] < 0:
            # The e/r term of the codimension formula cancels against the
            # bound, so only the q.m + tau part matters here.
            bound = sum(Lq[i] * base_m[i] for i in range(kk)) + Ltau
            t = max(1, _ceil_div(base_cost_exact - bound + 1, -c_exact[j]))
            assert base_cost_exact + t * c_exact[j] < bound
            return BoundCheckResult(False, box_m, box_e, (base_m, base_e),
                                    "exact-order")
        if c_ge[j] < 0:
            base_cost = 0 if j2 is None else c_ge[j2]
            # Push far enough that the cost drops below zero, hence below
            # every possible bound value (bounds are nonnegative).
            t = max(1, _ceil_div(base_cost + sat_bound + 1, -c_ge[j]))
            nu = [0] * s
            nu[j] = t
            if j2 is not None:
                nu[j2] += 1
            mm = tuple(min(box_m[i], sum(data.y[i][x] * nu[x] for x in range(s)))
                       for i in range(kk))
            ee = min(box_e, sum(data.z[x] * nu[x] for x in range(s)))
            return BoundCheckResult(False, box_m, box_e, (mm, ee), "min-order")

    # Per-coordinate caps.  Exact variant: a nonzero column is capped by
    # the box filters; a free column with nonnegative cost never helps
    # beyond providing the hit, so 1 suffices.  Min variant: the cap
    # saturates every box entry the coordinate touches.
    cap_exact, cap_ge = [], []
    for j in range(s):
        caps = [box_m[i] // data.y[i][j] for i in range(kk) if data.y[i][j] > 0]
        if data.z[j] > 0:
            caps.append(box_e // data.z[j])
        cap_exact.append(min(caps) if caps else 1)
        sat = [_ceil_div(box_m[i], data.y[i][j]) for i in range(kk)
               if data.y[i][j] > 0]
        if data.z[j] > 0:
            sat.append(_ceil_div(box_e, data.z[j]))
        cap_ge.append(max(sat) + 1 if sat else 1)

    y_np = np.array(data.y, dtype=np.int64).reshape(kk, s)
    z_np = np.array(data.z, dtype=np.int64)

    def scan(all_caps, cost, exact: bool):
        supports = sorted((S for S in data.nerve
                           if not any(S < S2 for S2 in data.nerve)),
                          key=lambda S: sorted(S))
        for T in supports:
            idx = sorted(T)
            if not idx or not any(data.in_w[j] for j in idx):
                continue
            hit_rows = [i for i, j in enumerate(idx) if data.in_w[j]]
            cvec = np.array([cost[j] for j in idx], dtype=np.int64)
            for cols in _chunked_grids([all_caps[j] for j in idx]):
                nus = np.stack(cols)  # |T| x N
                hit = nus[hit_rows, :].sum(axis=0) >= 1
                mvals = y_np[:, idx] @ nus
                evals = z_np[idx] @ nus
                cvals = cvec @ nus
                if exact:
                    feas = hit
                    for i in range(kk):
                        feas = feas & (mvals[i] <= box_m[i])
                    feas = feas & (evals <= box_e)
                    # e/r appears in the codimension and in the bound and
                    # cancels exactly.
                    bound = np.full(cvals.shape, Ltau, dtype=np.int64)
                    for i in range(kk):
                        bound = bound + Lq[i] * mvals[i]
                else:
                    feas = hit
                    bound = Lr * np.minimum(evals, box_e) + Ltau
                    for i in range(kk):
                        bound = bound + Lq[i] * np.minimum(mvals[i], box_m[i])
                viol = feas & (cvals < bound)
                if viol.any():
                    at = int(np.argmax(viol))
                    nu_at = nus[:, at]
                    mm = tuple(int(v) for v in (y_np[:, idx] @ nu_at))
                    ee = int(z_np[idx] @ nu_at)
                    if not exact:
                        mm = tuple(min(box_m[i], mm[i]) for i in range(kk))
                        ee = min(box_e, ee)
                    return (mm, ee)
        return None

    bad = scan(cap_exact, c_exact, exact=True)
    if bad is not None:
        return BoundCheckResult(False, box_m, box_e, bad, "exact-order")
    bad = scan(cap_ge, c_ge, exact=False)
    if bad is not None:
        return BoundCheckResult(False, box_m, box_e, bad, "min-order")
    return BoundCheckResult(True, box_m, box_e)
