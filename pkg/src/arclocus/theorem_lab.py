"""Executable verification of the headline identities on curated cases:
the adjunction identity between an ambient pair with a divisor and the
induced pair on the divisor, its log-canonicity corollary, and the
semicontinuity inequality between nested centers.

The ambient side is always computed by weight-vector minimization on
smooth affine space (the divisor enters as one more subscheme with
coefficient 1, via its Newton support).  The divisor side comes either
from hand-built resolution data with an independently derived
discrepancy table, or from a stated expected value; the class docstrings
record which.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InputError
from .extended import ExtendedRational, frac
from .lattice_opt import PiecewiseProgram, solve_piecewise
from .monomial_arcs import CenterSpec, MonomialIdeal, mld_monomial
from .resolution_model import PairCoefficients, ResolutionData, mld_on_w


@dataclass(frozen=True)
class DivisorSide:
    """How the divisor-side mld is produced: a resolution model of the
    pair on the divisor, or an expected value derived independently."""

    resolution: Optional[tuple[ResolutionData, PairCoefficients]] = None
    expected: Optional[ExtendedRational] = None

    @staticmethod
    def from_resolution(data: ResolutionData, pair: PairCoefficients) -> "DivisorSide":
        return DivisorSide(resolution=(data, pair))

    @staticmethod
    def from_expected(value) -> "DivisorSide":
        return DivisorSide(expected=ExtendedRational.of(value))

    def value(self) -> ExtendedRational:
        if (self.resolution is None) == (self.expected is None):
            raise InputError("divisor side needs exactly one of a resolution "
                             "model or an expected value")
        if self.resolution is not None:
            data, pair = self.resolution
            return mld_on_w(data, pair).value
        return self.expected


@dataclass(frozen=True)
class AdjunctionCase:
    """Smooth affine ambient of dimension d with a hypersurface divisor
    (given by its Newton support, nondegeneracy assumed), a boundary of
    weighted monomial ideals, a center inside the divisor, and the
    divisor-side data."""

    d: int
    divisor_support: tuple[tuple[int, ...], ...]
    boundary: tuple[tuple[Fraction, MonomialIdeal], ...]
    center: CenterSpec
    divisor_side: DivisorSide

    @staticmethod
    def make(d, divisor_support, boundary, center, divisor_side) -> "AdjunctionCase":
        d = int(d)
        sup = tuple(tuple(int(x) for x in u) for u in divisor_support)
        if not sup or any(len(u) != d or min(u) < 0 for u in sup):
            raise InputError("divisor support must be natural vectors of length d")
        if any(not any(u) for u in sup):
            raise InputError("divisor has a constant term")
        bd = []
        for q, ideal in boundary:
            qv = frac(q)
            if qv < 0:
                raise InputError("boundary coefficients must be nonnegative")
            if ideal.d != d:
                raise InputError("boundary ideal dimension mismatch")
            bd.append((qv, ideal))
        center.validate(d)
        case = AdjunctionCase(d, sup, tuple(bd), center, divisor_side)
        case._check_divisor_not_in_boundary()
        return case

    def _check_divisor_not_in_boundary(self) -> None:
        # The identity requires the divisor not to sit inside any
        # boundary subscheme; on monomial data: not every support
        # monomial may lie in the ideal.
        for _, ideal in self.boundary:
            if ideal.is_unit:
                continue
            if all(any(all(a >= b for a, b in zip(u, g)) for g in ideal.generators)
                   for u in self.divisor_support):
                raise InputError("divisor support lies inside a boundary ideal")


@dataclass(frozen=True)
class AdjunctionResult:
    lhs: ExtendedRational   # ambient route: mld(W; X, D + Y)
    rhs: ExtendedRational   # divisor route: mld(W; D, Y|_D)
    equal: bool


def _ambient_mld(case: AdjunctionCase) -> ExtendedRational:
    strict = case.center.strict_positive(case.d)
    if not strict:
        raise InputError("the adjunction center must be a proper subset")
    terms = [(Fraction(1), case.divisor_support)]
    terms.extend((q, ideal.generators) for q, ideal in case.boundary)
    prog = PiecewiseProgram.make([Fraction(1)] * case.d, min_terms=terms,
                                 strict_positive=strict)
    return solve_piecewise(prog).value


def check_inversion_of_adjunction(case: AdjunctionCase) -> AdjunctionResult:
    """Evaluate both sides of mld(W; ambient, divisor + boundary) =
    mld(W; divisor, boundary restricted) and report whether they agree."""
    lhs = _ambient_mld(case)
    rhs = case.divisor_side.value()
    return AdjunctionResult(lhs, rhs, lhs == rhs)


def check_lc_adjunction(case: AdjunctionCase) -> bool:
    """The log-canonicity corollary: the ambient pair is log canonical
    around the divisor exactly when the induced pair on the divisor is.
    True when the two sides agree in sign."""
    res = check_inversion_of_adjunction(case)
    return (res.lhs >= 0) == (res.rhs >= 0)


# ----------------------------------------------------------------------
# Semicontinuity
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialPair:
    """Smooth affine ambient with weighted monomial ideals."""

    d: int
    ideals: tuple[MonomialIdeal, ...]
    q: tuple[Fraction, ...]

    @staticmethod
    def make(d, ideals, q) -> "MonomialPair":
        d = int(d)
        ideals = tuple(ideals)
        qv = tuple(frac(x) for x in q)
        if len(qv) != len(ideals):
            raise InputError("q must have one entry per ideal")
        if any(x < 0 for x in qv):
            raise InputError("q entries must be nonnegative")
        if any(i.d != d for i in ideals):
            raise InputError("ideal dimension mismatch")
        return MonomialPair(d, ideals, qv)


@dataclass(frozen=True)
class SemicontinuityCase:
    pair: MonomialPair
    v: CenterSpec             # the smaller center
    w: CenterSpec             # the larger center (may be the whole space)
    codim_vw: int

    @staticmethod
    def make(pair, v, w, codim_vw=None) -> "SemicontinuityCase":
        v.validate(pair.d)
        w.validate(pair.d)
        if v.kind != "subspace":
            raise InputError("the smaller center must be a coordinate subspace")
        sw = w.coords if w.kind == "subspace" else frozenset()
        if not (sw < v.coords):
            raise InputError("the centers must be strictly nested: W's "
                             "vanishing set strictly inside V's")
        expected = len(v.coords) - len(sw)
        if codim_vw is not None and int(codim_vw) != expected:
            raise InputError(f"codim_vw={codim_vw} but the coordinate data "
                             f"gives {expected}")
        return SemicontinuityCase(pair, v, w, expected)


@dataclass(frozen=True)
class SemicontinuityResult:
    mld_v: ExtendedRational
    mld_w: ExtendedRational
    codim: int
    holds: bool


def generic_point_mld(pair: MonomialPair, center: CenterSpec) -> ExtendedRational:
    """mld at the generic point of a coordinate subspace: weight vectors
    supported exactly on the vanishing coordinates compute it, so the
    program projects onto those coordinates (dropped coordinates are
    local units and erase the generators they dominate)."""
    center.validate(pair.d)
    if center.kind == "whole_space":
        return ExtendedRational.of(0)
    coords = sorted(center.coords)
    projected = [MonomialIdeal.make(len(coords),
                                    [[g[j] for j in coords] for g in ideal.generators])
                 for ideal in pair.ideals]
    res = mld_monomial(projected, pair.q, CenterSpec.origin(len(coords)),
                       d=len(coords) if not projected else None)
    return res.value


def check_semicontinuity(case: SemicontinuityCase) -> SemicontinuityResult:
    """Verify mld at the generic point of V against mld at the generic
    point of W plus the codimension of V in W."""
    mld_v = generic_point_mld(case.pair, case.v)
    mld_w = generic_point_mld(case.pair, case.w)
    holds = mld_v <= mld_w + ExtendedRational.of(case.codim_vw)
    return SemicontinuityResult(mld_v, mld_w, case.codim_vw, holds)
