import itertools
from fractions import Fraction

import pytest

from arclocus import NEG_INF, InputError
from arclocus.monomial_arcs import CenterSpec, MonomialIdeal
from arclocus.resolution_model import PairCoefficients, ResolutionData
from arclocus.theorem_lab import (AdjunctionCase, DivisorSide, MonomialPair,
                                  SemicontinuityCase, check_inversion_of_adjunction,
                                  check_lc_adjunction, check_semicontinuity,
                                  generic_point_mld)

F = Fraction


def _divisor_model(dim, k):
    """One exceptional divisor over a point of a dim-dimensional variety,
    with relative canonical coefficient k: its log discrepancy is k+1."""
    data = ResolutionData.make(d=dim, r=1, k=[k], y=[], z=[0],
                               in_w=[True], eq_w=[True])
    return DivisorSide.from_resolution(data, PairCoefficients.make([]))


def a1_surface_case(k=0):
    """Quadric cone surface in affine 3-space, center the origin.  The
    divisor side is the minimal resolution of the surface point: a single
    exceptional curve with k=0, so its discrepancy table is (k+1,) = (1,).
    The discrepancy was derived independently by blow-up arithmetic."""
    return AdjunctionCase.make(
        3, [(2, 0, 0), (0, 2, 0), (0, 0, 2)], [],
        CenterSpec.origin(3), _divisor_model(2, k))


def odp_threefold_case():
    """Ordinary double point x^2+y^2+z^2+w^2 in affine 4-space; the
    blow-up of the threefold node has one exceptional divisor with k=1,
    hence discrepancy 2 (derived by blow-up arithmetic)."""
    return AdjunctionCase.make(
        4, [(2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2)], [],
        CenterSpec.origin(4), _divisor_model(3, 1))


def smooth_divisor_case():
    """The coordinate line in the plane, center a point of it; the
    divisor side is the point on the line itself: discrepancy 1."""
    return AdjunctionCase.make(
        2, [(1, 0)], [], CenterSpec.origin(2), _divisor_model(1, 0))


def cubic_cone_case():
    """Cone over an elliptic curve: blowing up the vertex gives one
    exceptional divisor with k=-1, hence discrepancy 0 (derived)."""
    return AdjunctionCase.make(
        3, [(3, 0, 0), (0, 3, 0), (0, 0, 3)], [],
        CenterSpec.origin(3), _divisor_model(2, -1))


def quartic_curve_case():
    """x^4+y^4 in the plane: the ambient weight value is -2 at (1,1), so
    neither side is log canonical; the divisor side is supplied as the
    expected value -inf (derived by lattice search of both readings)."""
    return AdjunctionCase.make(
        2, [(4, 0), (0, 4)], [], CenterSpec.origin(2),
        DivisorSide.from_expected(NEG_INF))


def test_inversion_of_adjunction_curated():
    for case, both in [(a1_surface_case(), 1), (odp_threefold_case(), 2),
                       (smooth_divisor_case(), 1)]:
        res = check_inversion_of_adjunction(case)
        assert res.equal, (case, res)
        assert res.lhs == both and res.rhs == both


def test_inversion_negative_control():
    corrupted = a1_surface_case(k=1)  # divisor-side k perturbed by one
    res = check_inversion_of_adjunction(corrupted)
    assert not res.equal
    assert res.lhs == 1 and res.rhs == 2


def test_lc_adjunction():
    assert check_lc_adjunction(a1_surface_case())
    assert check_lc_adjunction(cubic_cone_case())
    assert check_lc_adjunction(quartic_curve_case())
    res = check_inversion_of_adjunction(cubic_cone_case())
    assert res.lhs == 0 and res.rhs == 0
    res = check_inversion_of_adjunction(quartic_curve_case())
    assert res.lhs == NEG_INF


def test_divisor_not_inside_boundary_enforced():
    with pytest.raises(InputError, match="inside a boundary ideal"):
        AdjunctionCase.make(
            2, [(2, 1)], [(F(1), MonomialIdeal.make(2, [(1, 1)]))],
            CenterSpec.origin(2), DivisorSide.from_expected(0))


def test_divisor_side_needs_exactly_one_route():
    with pytest.raises(InputError):
        DivisorSide().value()


def test_adjunction_with_boundary():
    # Ambient pair: divisor V(x) plus boundary (1/2) * (y); at the origin
    # of the plane the weight value is min over w >= 1 of
    # w1 + w2 - w1 - w2/2 = w2/2, i.e. 1/2; the line (d=1) with a point
    # of multiplicity 1 and coefficient 1/2 has discrepancy 1 - 1/2.
    line = ResolutionData.make(d=1, r=1, k=[0], y=[[1]], z=[0],
                               in_w=[True], eq_w=[True])
    case = AdjunctionCase.make(
        2, [(1, 0)], [(F(1, 2), MonomialIdeal.make(2, [(0, 1)]))],
        CenterSpec.origin(2),
        DivisorSide.from_resolution(line, PairCoefficients.make([F(1, 2)])))
    res = check_inversion_of_adjunction(case)
    assert res.equal and res.lhs == F(1, 2)


# ----------------------------------------------------------------------
# Semicontinuity
# ----------------------------------------------------------------------

def xy_pair():
    return MonomialPair.make(2, [MonomialIdeal.make(2, [(1, 1)])], [1])


def test_semicontinuity_examples():
    case = SemicontinuityCase.make(xy_pair(), CenterSpec.origin(2),
                                   CenterSpec.subspace([0]))
    res = check_semicontinuity(case)
    assert (res.mld_v, res.mld_w, res.holds) == (0, 0, True)

    empty = MonomialPair.make(2, [], [])
    case = SemicontinuityCase.make(empty, CenterSpec.origin(2),
                                   CenterSpec.subspace([0]))
    res = check_semicontinuity(case)
    assert res.mld_v == 2 and res.mld_w == 1 and res.holds
    assert res.mld_v == res.mld_w + res.codim  # equality here

    case = SemicontinuityCase.make(empty, CenterSpec.subspace([0]),
                                   CenterSpec.whole_space())
    res = check_semicontinuity(case)
    assert res.mld_w == 0 and res.mld_v == 1 and res.holds


def test_semicontinuity_requires_nesting():
    with pytest.raises(InputError):
        SemicontinuityCase.make(xy_pair(), CenterSpec.subspace([0]),
                                CenterSpec.subspace([0]))
    with pytest.raises(InputError):
        SemicontinuityCase.make(xy_pair(), CenterSpec.subspace([0]),
                                CenterSpec.subspace([1]))
    with pytest.raises(InputError):
        SemicontinuityCase.make(xy_pair(), CenterSpec.origin(2),
                                CenterSpec.subspace([0]), codim_vw=2)


CURATED_PAIRS = [
    MonomialPair.make(2, [], []),
    MonomialPair.make(2, [MonomialIdeal.make(2, [(1, 1)])], [1]),
    MonomialPair.make(2, [MonomialIdeal.make(2, [(1, 0), (0, 1)])], [F(3, 2)]),
    MonomialPair.make(3, [MonomialIdeal.make(3, [(2, 0, 0), (0, 2, 0), (0, 0, 2)])],
                      [1]),
    MonomialPair.make(3, [MonomialIdeal.make(3, [(1, 0, 0), (0, 1, 0)]),
                          MonomialIdeal.make(3, [(0, 0, 1)])], [F(1, 2), 1]),
    MonomialPair.make(4, [MonomialIdeal.make(4, [(1, 0, 0, 0), (0, 1, 0, 0),
                                                 (0, 0, 1, 0), (0, 0, 0, 1)])],
                      [2]),
    MonomialPair.make(4, [], []),
]


def _all_chains(d):
    subsets = [frozenset(c) for size in range(d + 1)
               for c in itertools.combinations(range(d), size)]
    for sv in subsets:
        if not sv:
            continue
        for sw in subsets:
            if sw < sv:
                yield (CenterSpec.subspace(sv),
                       CenterSpec.subspace(sw) if sw else CenterSpec.whole_space())


def test_semicontinuity_over_all_chains():
    violations = []
    for pair in CURATED_PAIRS:
        for v, w in _all_chains(pair.d):
            res = check_semicontinuity(SemicontinuityCase.make(pair, v, w))
            if not res.holds:
                violations.append((pair, v, w, res))
    assert not violations


def test_generic_point_mld_projects_units():
    # Pair (A^3, (x^2, y^2, z^2)): at the generic point of the plane
    # x = 0 the ideal contains units, so the mld is the bare codimension.
    pair = MonomialPair.make(
        3, [MonomialIdeal.make(3, [(2, 0, 0), (0, 2, 0), (0, 0, 2)])], [1])
    assert generic_point_mld(pair, CenterSpec.subspace([0])) == 1
    assert generic_point_mld(pair, CenterSpec.whole_space()) == 0
