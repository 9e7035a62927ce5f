"""Contact-locus codimensions and mlds for monomial data on smooth
affine space, computed by minimizing over coordinate weight vectors.

A weight vector w in N^d prices the coordinate directions; the order it
assigns to a monomial ideal is the minimum of w.u over the exponent
vectors u of the generators.  Contact loci then stratify by w with
stratum codimension sum(w), which turns every codimension and mld into a
PiecewiseProgram.  The validity of this reduction on smooth ambient
space is the module's central design claim and is checked against the
finite-field jet-counting oracle on every curated instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InputError
from .extended import ExtendedRational, frac
from .lattice_opt import PiecewiseProgram, Vector, solve_piecewise


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal given by its minimal exponent vectors.

    Dominated generators are removed on construction.  A zero exponent
    vector marks the unit ideal; every weight vector assigns it order 0.
    """

    d: int
    generators: tuple[Vector, ...]

    @staticmethod
    def make(d: int, generators: Sequence[Sequence[int]]) -> "MonomialIdeal":
        d = int(d)
        if d < 0:
            raise InputError("ambient dimension must be nonnegative")
        gens = []
        for g in generators:
            v = tuple(int(x) for x in g)
            if len(v) != d or any(x < 0 for x in v):
                raise InputError("generators must be natural vectors of length d")
            gens.append(v)
        if not gens:
            raise InputError("a monomial ideal needs at least one generator")
        minimal = [g for g in gens
                   if not any(h != g and all(a <= b for a, b in zip(h, g))
                              for h in gens)]
        # Equal duplicates survive the dominance filter; dedupe, keep order.
        seen, out = set(), []
        for g in minimal:
            if g not in seen:
                seen.add(g)
                out.append(g)
        return MonomialIdeal(d, tuple(out))

    @property
    def is_unit(self) -> bool:
        return any(not any(g) for g in self.generators)


@dataclass(frozen=True)
class CenterSpec:
    """The subset W over which arcs are based: either the whole space or
    the coordinate subspace cut out by the variables in ``coords``."""

    kind: str  # "whole_space" | "subspace"
    coords: frozenset[int] = frozenset()

    @staticmethod
    def whole_space() -> "CenterSpec":
        return CenterSpec("whole_space")

    @staticmethod
    def subspace(coords) -> "CenterSpec":
        cs = frozenset(int(j) for j in coords)
        if not cs:
            raise InputError("a coordinate-subspace center needs a nonempty "
                             "set of vanishing coordinates")
        return CenterSpec("subspace", cs)

    @staticmethod
    def origin(d: int) -> "CenterSpec":
        return CenterSpec.subspace(range(d))

    def validate(self, d: int) -> None:
        if self.kind not in ("whole_space", "subspace"):
            raise InputError(f"unknown center kind {self.kind!r}")
        if self.kind == "subspace":
            if not self.coords:
                raise InputError("empty coordinate-subspace center")
            if any(j < 0 or j >= d for j in self.coords):
                raise InputError("center coordinate out of range")
        elif self.coords:
            raise InputError("whole-space center carries no coordinates")

    def strict_positive(self, d: int) -> frozenset[int]:
        return self.coords if self.kind == "subspace" else frozenset()


@dataclass(frozen=True)
class NewtonHypersurface:
    """The exponent support of a hypersurface equation, plus the two
    caller-asserted hypotheses the Newton-side computations rely on."""

    d: int
    support: tuple[Vector, ...]
    nondegenerate_asserted: bool = False
    singular_locus_is_origin_asserted: bool = False

    @staticmethod
    def make(d, support, nondegenerate_asserted=False,
             singular_locus_is_origin_asserted=False) -> "NewtonHypersurface":
        d = int(d)
        sup = []
        for u in support:
            v = tuple(int(x) for x in u)
            if len(v) != d or any(x < 0 for x in v):
                raise InputError("support must consist of natural vectors of length d")
            sup.append(v)
        if not sup:
            raise InputError("hypersurface support must be nonempty")
        if any(not any(u) for u in sup):
            raise InputError("hypersurface has a constant term (f(0) != 0)")
        return NewtonHypersurface(d, tuple(sup),
                                  bool(nondegenerate_asserted),
                                  bool(singular_locus_is_origin_asserted))


def ord_w(ideal: MonomialIdeal, w: Sequence[int]) -> int:
    """Order the weight w assigns to the ideal: min over generators of w.u."""
    wv = tuple(int(x) for x in w)
    if len(wv) != ideal.d:
        raise InputError(f"weight length {len(wv)} != ambient dimension {ideal.d}")
    if any(x < 0 for x in wv):
        raise InputError("weights must be nonnegative")
    return min(sum(a * b for a, b in zip(g, wv)) for g in ideal.generators)


def _shared_dimension(ideals: Sequence[MonomialIdeal]) -> int:
    if not ideals:
        raise InputError("need at least one ideal")
    d = ideals[0].d
    if any(i.d != d for i in ideals):
        raise InputError("all ideals must share the ambient dimension")
    return d


def contact_program(ideals: Sequence[MonomialIdeal], m: Sequence[int],
                    center: CenterSpec) -> PiecewiseProgram:
    """The weight program for the locus of arcs with order at least m_i
    along each ideal, based over the center."""
    d = _shared_dimension(ideals)
    center.validate(d)
    mv = tuple(int(x) for x in m)
    if len(mv) != len(ideals) or any(x < 0 for x in mv):
        raise InputError("m must be a natural vector, one entry per ideal")
    rows = [(ideal.generators, mi) for ideal, mi in zip(ideals, mv)]
    return PiecewiseProgram.make([Fraction(1)] * d,
                                 strict_positive=center.strict_positive(d),
                                 ge_order_rows=rows)


def contact_codim_monomial(ideals: Sequence[MonomialIdeal], m: Sequence[int],
                           center: CenterSpec) -> ExtendedRational:
    """Codimension of the contact locus: min of sum(w) over admissible
    weights w with ord_w(a_i) >= m_i."""
    value, _ = (solve_piecewise(contact_program(ideals, m, center)).value, None)
    return value


@dataclass(frozen=True)
class MonomialMld:
    """An mld value together with the witness weight vector; when the
    value is -inf, a primitive weight direction realizing a negative
    log discrepancy and that raw negative value."""

    value: ExtendedRational
    witness: Optional[Vector] = None
    negative_direction: Optional[Vector] = None
    negative_value: Optional[Fraction] = None


def mld_program(ideals: Sequence[MonomialIdeal], q: Sequence[Fraction],
                center: CenterSpec) -> PiecewiseProgram:
    if ideals:
        d = _shared_dimension(ideals)
    elif center.kind == "subspace":
        d = max(center.coords) + 1
    else:
        raise InputError("cannot infer the ambient dimension")
    center.validate(d)
    if center.kind == "whole_space":
        raise InputError("mld at the whole space is 0 by convention; "
                         "pick a proper center")
    qv = tuple(frac(x) for x in q)
    if len(qv) != len(ideals):
        raise InputError("q must have one entry per ideal")
    if any(x < 0 for x in qv):
        raise InputError("q entries must be nonnegative")
    terms = [(qi, ideal.generators) for qi, ideal in zip(qv, ideals)]
    return PiecewiseProgram.make([Fraction(1)] * d, min_terms=terms,
                                 strict_positive=center.strict_positive(d))


def mld_monomial(ideals: Sequence[MonomialIdeal], q: Sequence[Fraction],
                 center: CenterSpec, d: Optional[int] = None) -> MonomialMld:
    """Minimal log discrepancy of the pair (affine d-space, sum q_i a_i)
    over the coordinate-subspace center: the infimum over admissible
    weights w of sum(w) - sum q_i ord_w(a_i).

    The objective is 1-homogeneous, so a negative value at any weight
    already drives the infimum to -inf; the returned value is the true
    lattice infimum and a primitive negative direction is reported when
    it exists.  Centers that are coordinate subspaces of intermediate
    dimension are supported but are oracle-tested only at the origin,
    the whole space and a line center; treat them as experimental.
    """
    if d is not None and ideals and _shared_dimension(ideals) != int(d):
        raise InputError("explicit d disagrees with the ideals")
    if not ideals and d is not None and center.kind == "subspace":
        center.validate(int(d))
        prog = PiecewiseProgram.make([Fraction(1)] * int(d),
                                     strict_positive=center.strict_positive(int(d)))
    else:
        prog = mld_program(ideals, q, center)
    sol = solve_piecewise(prog)
    return MonomialMld(sol.value, sol.witness,
                       sol.negative_direction, sol.negative_value)


def nondegenerate_hypersurface_mld(h: NewtonHypersurface, q,
                                   center: Optional[CenterSpec] = None
                                   ) -> MonomialMld:
    """mld at the origin of (affine space, q*D) for a hypersurface D that
    is general with respect to its Newton polyhedron: the same weight
    minimization with ord_w(f) equal to the minimum of w.u over the
    support.  Nondegeneracy is a trusted input flag, never verified."""
    if not h.nondegenerate_asserted:
        raise InputError("the Newton route requires nondegenerate_asserted")
    center = center or CenterSpec.origin(h.d)
    ideal = MonomialIdeal.make(h.d, h.support)
    return mld_monomial([ideal], [frac(q)], center)
