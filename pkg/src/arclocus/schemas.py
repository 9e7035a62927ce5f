"""JSON document schemas and loaders for the command-line interface.

A document is a JSON object with exactly one primary section naming the
input kind (resolution_data, monomial_pair, hypersurface,
adjunction_case, semicontinuity_case) plus the auxiliary sections the
command needs (pair, contact, center, query, arc).  Unknown keys are
rejected.  Rationals travel as integers or "a/b" strings, extended
values additionally as "-inf"/"+inf"; nothing is ever a float.
Indices (divisors, coordinates) are 0-based.
"""

from __future__ import annotations

from typing import Optional

import jsonschema

from .errors import InputError
from .extended import ExtendedRational, frac
from .jet_engine import ContactQuery, Poly, TruncatedArc, poly_from_support
from .monomial_arcs import CenterSpec, MonomialIdeal, NewtonHypersurface
from .polyparse import parse_polynomial
from .resolution_model import PairCoefficients, ResolutionData
from .theorem_lab import (AdjunctionCase, DivisorSide, MonomialPair,
                          SemicontinuityCase)

RATIONAL = {"oneOf": [{"type": "integer"},
                      {"type": "string", "pattern": r"^-?[0-9]+(/[1-9][0-9]*)?$"}]}
EXTENDED = {"oneOf": [{"type": "integer"},
                      {"type": "string",
                       "pattern": r"^(-?[0-9]+(/[1-9][0-9]*)?|[+-]inf)$"}]}
NATURAL = {"type": "integer", "minimum": 0}
NAT_VECTOR = {"type": "array", "items": NATURAL}
BOOL_VECTOR = {"type": "array", "items": {"type": "boolean"}}

CENTER = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["origin", "whole_space", "subspace"]},
        "coords": {"type": "array", "items": NATURAL},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

RESOLUTION_DATA = {
    "type": "object",
    "properties": {
        "d": {"type": "integer", "minimum": 1},
        "r": {"type": "integer", "minimum": 1},
        "s": NATURAL,
        "k": {"type": "array", "items": RATIONAL},
        "y": {"type": "array", "items": NAT_VECTOR},
        "z": NAT_VECTOR,
        "in_w": BOOL_VECTOR,
        "eq_w": BOOL_VECTOR,
        "meets_w": BOOL_VECTOR,
        "nerve": {"type": "array", "items": {"type": "array", "items": NATURAL}},
    },
    "required": ["d", "r", "k", "y", "z", "in_w"],
    "additionalProperties": False,
}

MONOMIAL_IDEAL = {
    "type": "object",
    "properties": {"generators": {"type": "array", "items": NAT_VECTOR,
                                  "minItems": 1}},
    "required": ["generators"],
    "additionalProperties": False,
}

MONOMIAL_PAIR = {
    "type": "object",
    "properties": {
        "d": {"type": "integer", "minimum": 1},
        "ideals": {"type": "array", "items": MONOMIAL_IDEAL},
        "q": {"type": "array", "items": RATIONAL},
    },
    "required": ["d", "ideals", "q"],
    "additionalProperties": False,
}

HYPERSURFACE = {
    "type": "object",
    "properties": {
        "d": {"type": "integer", "minimum": 1},
        "variables": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "f": {"type": "string"},
        "support": {"type": "array", "items": NAT_VECTOR, "minItems": 1},
        "nondegenerate_asserted": {"type": "boolean"},
        "singular_locus_is_origin_asserted": {"type": "boolean"},
    },
    "additionalProperties": False,
}

PAIR = {
    "type": "object",
    "properties": {
        "q": {"type": "array", "items": RATIONAL},
        "w_is_proper": {"type": "boolean"},
    },
    "required": ["q"],
    "additionalProperties": False,
}

CONTACT = {
    "type": "object",
    "properties": {"m": NAT_VECTOR, "e": NATURAL},
    "required": ["m"],
    "additionalProperties": False,
}

QUERY = {
    "type": "object",
    "properties": {
        "constraints": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "ideal": MONOMIAL_IDEAL,
                    "poly": {"type": "string"},
                    "relation": {"enum": ["exact", "at_least"]},
                    "order": NATURAL,
                },
                "required": ["relation", "order"],
                "additionalProperties": False,
            },
        },
        "base_point": CENTER,
    },
    "additionalProperties": False,
}

ARC = {
    "type": "object",
    "properties": {
        "coefficients": {"type": "array",
                         "items": {"type": "array", "items": RATIONAL},
                         "minItems": 1},
        "order": NATURAL,
        "jacobian_order": NATURAL,
        "prime": {"type": ["integer", "null"], "minimum": 2},
    },
    "required": ["coefficients", "order", "jacobian_order"],
    "additionalProperties": False,
}

DIVISOR_SIDE = {
    "type": "object",
    "properties": {
        "resolution_data": RESOLUTION_DATA,
        "q": {"type": "array", "items": RATIONAL},
        "w_is_proper": {"type": "boolean"},
        "expected_mld": EXTENDED,
    },
    "additionalProperties": False,
}

ADJUNCTION_CASE = {
    "type": "object",
    "properties": {
        "d": {"type": "integer", "minimum": 1},
        "variables": {"type": "array", "items": {"type": "string"}},
        "divisor_f": {"type": "string"},
        "divisor_support": {"type": "array", "items": NAT_VECTOR},
        "boundary": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {"q": RATIONAL, "generators": {
                    "type": "array", "items": NAT_VECTOR, "minItems": 1}},
                "required": ["q", "generators"],
                "additionalProperties": False,
            },
        },
        "center": CENTER,
        "divisor_side": DIVISOR_SIDE,
    },
    "required": ["d", "boundary", "center", "divisor_side"],
    "additionalProperties": False,
}

SEMICONTINUITY_CASE = {
    "type": "object",
    "properties": {
        "pair": MONOMIAL_PAIR,
        "v": CENTER,
        "w": CENTER,
        "codim_vw": NATURAL,
    },
    "required": ["pair", "v", "w"],
    "additionalProperties": False,
}

_PRIMARY = ("resolution_data", "monomial_pair", "hypersurface",
            "adjunction_case", "semicontinuity_case")
_AUX_ALLOWED = {
    "resolution_data": {"pair", "contact"},
    "monomial_pair": {"contact", "center"},
    "hypersurface": {"query", "arc"},
    "adjunction_case": set(),
    "semicontinuity_case": set(),
}
_SECTION_SCHEMAS = {
    "resolution_data": RESOLUTION_DATA,
    "monomial_pair": MONOMIAL_PAIR,
    "hypersurface": HYPERSURFACE,
    "adjunction_case": ADJUNCTION_CASE,
    "semicontinuity_case": SEMICONTINUITY_CASE,
    "pair": PAIR,
    "contact": CONTACT,
    "center": CENTER,
    "query": QUERY,
    "arc": ARC,
}

REPORT = {
    "type": "object",
    "properties": {
        "command": {"type": "string"},
        "parameters": {"type": "object"},
        "results": {"type": "object"},
    },
    "required": ["command", "parameters", "results"],
    "additionalProperties": False,
}


def validate_document(doc: dict) -> str:
    """Validate shape and keys; return the primary section name."""
    if not isinstance(doc, dict):
        raise InputError("input document must be a JSON object")
    primary = [k for k in doc if k in _PRIMARY]
    if len(primary) != 1:
        raise InputError(f"document must contain exactly one of {_PRIMARY}, "
                         f"got {sorted(doc)}")
    kind = primary[0]
    allowed = {kind} | _AUX_ALLOWED[kind]
    unknown = set(doc) - allowed
    if unknown:
        raise InputError(f"unknown document keys for {kind}: {sorted(unknown)}")
    for key, value in doc.items():
        try:
            jsonschema.validate(value, _SECTION_SCHEMAS[key])
        except jsonschema.ValidationError as exc:
            raise InputError(f"section {key!r}: {exc.message}") from exc
    return kind


def validate_report(report: dict) -> None:
    try:
        jsonschema.validate(report, REPORT)
    except jsonschema.ValidationError as exc:
        raise InputError(f"report failed schema validation: {exc.message}") from exc


# ----------------------------------------------------------------------
# Loaders
# ----------------------------------------------------------------------

def load_center(obj: Optional[dict], d: int) -> CenterSpec:
    if obj is None:
        return CenterSpec.origin(d)
    kind = obj["kind"]
    if kind == "origin":
        return CenterSpec.origin(d)
    if kind == "whole_space":
        return CenterSpec.whole_space()
    coords = obj.get("coords")
    if not coords:
        raise InputError("subspace center needs nonempty coords")
    return CenterSpec.subspace(coords)


def parse_center_flag(text: str, d: int) -> CenterSpec:
    """--center origin|all|subspace:j1,j2,..."""
    text = text.strip()
    if text == "origin":
        return CenterSpec.origin(d)
    if text == "all":
        return CenterSpec.whole_space()
    if text.startswith("subspace:"):
        coords = [int(x) for x in text[len("subspace:"):].split(",") if x]
        return CenterSpec.subspace(coords)
    raise InputError(f"bad --center value {text!r}; expected origin, all, "
                     "or subspace:j1,j2,...")


def load_resolution_data(obj: dict) -> ResolutionData:
    return ResolutionData.make(
        d=obj["d"], r=obj["r"], k=obj["k"], y=obj["y"], z=obj["z"],
        in_w=obj["in_w"], eq_w=obj.get("eq_w"), meets_w=obj.get("meets_w"),
        nerve=obj.get("nerve"), s=obj.get("s"))


def load_pair(obj: Optional[dict]) -> PairCoefficients:
    if obj is None:
        return PairCoefficients.make([])
    return PairCoefficients.make(obj["q"], obj.get("w_is_proper", True))


def load_monomial_pair(obj: dict) -> MonomialPair:
    ideals = [MonomialIdeal.make(obj["d"], i["generators"]) for i in obj["ideals"]]
    return MonomialPair.make(obj["d"], ideals, obj["q"])


def load_hypersurface(obj: dict) -> tuple[NewtonHypersurface, Poly, tuple[str, ...]]:
    """Returns the Newton data, the working polynomial and the variable
    names.  Exactly one of f-text (with variables) or explicit support
    must be given; a support-only document gets unit coefficients."""
    has_f = "f" in obj
    has_support = "support" in obj
    if has_f == has_support:
        raise InputError("hypersurface needs exactly one of 'f' (with "
                         "'variables') or 'support'")
    if has_f:
        if "variables" not in obj:
            raise InputError("'f' requires 'variables'")
        variables = tuple(obj["variables"])
        d = obj.get("d", len(variables))
        if d != len(variables):
            raise InputError("d disagrees with the number of variables")
        poly = parse_polynomial(obj["f"], variables)
        if poly.is_zero:
            raise InputError("hypersurface polynomial is zero")
        support = poly.support()
    else:
        if "d" not in obj:
            raise InputError("'support' requires 'd'")
        d = obj["d"]
        variables = tuple(f"x{i}" for i in range(d))
        support = tuple(tuple(u) for u in obj["support"])
        poly = poly_from_support(d, support)
    h = NewtonHypersurface.make(
        d, support,
        nondegenerate_asserted=obj.get("nondegenerate_asserted", False),
        singular_locus_is_origin_asserted=obj.get(
            "singular_locus_is_origin_asserted", False))
    return h, poly, variables


def load_query(obj: Optional[dict], d: int,
               variables: tuple[str, ...]) -> Optional[ContactQuery]:
    if obj is None:
        return None
    constraints = []
    for row in obj.get("constraints", ()):
        if ("ideal" in row) == ("poly" in row):
            raise InputError("each constraint needs exactly one of 'ideal' "
                             "or 'poly'")
        if "ideal" in row:
            subject = MonomialIdeal.make(d, row["ideal"]["generators"])
        else:
            subject = parse_polynomial(row["poly"], variables)
        constraints.append((subject, row["relation"], row["order"]))
    base = load_center(obj["base_point"], d) if "base_point" in obj else None
    return ContactQuery.make(constraints, base)


def load_arc(obj: dict) -> tuple[TruncatedArc, int]:
    prime = obj.get("prime")
    coeffs = [[frac(c) for c in row] for row in obj["coefficients"]]
    arc = TruncatedArc.make(obj["order"], coeffs, field=prime)
    return arc, obj["jacobian_order"]


def load_divisor_side(obj: dict) -> DivisorSide:
    has_res = "resolution_data" in obj
    has_expected = "expected_mld" in obj
    if has_res == has_expected:
        raise InputError("divisor_side needs exactly one of 'resolution_data' "
                         "or 'expected_mld'")
    if has_res:
        data = load_resolution_data(obj["resolution_data"])
        pair = PairCoefficients.make(obj.get("q", []),
                                     obj.get("w_is_proper", True))
        return DivisorSide.from_resolution(data, pair)
    return DivisorSide.from_expected(ExtendedRational.from_string(
        str(obj["expected_mld"])))


def load_adjunction_case(obj: dict) -> AdjunctionCase:
    d = obj["d"]
    has_f = "divisor_f" in obj
    has_support = "divisor_support" in obj
    if has_f == has_support:
        raise InputError("adjunction case needs exactly one of 'divisor_f' "
                         "or 'divisor_support'")
    if has_f:
        variables = tuple(obj.get("variables") or ())
        if len(variables) != d:
            raise InputError("'divisor_f' requires d variable names")
        support = parse_polynomial(obj["divisor_f"], variables).support()
    else:
        support = tuple(tuple(u) for u in obj["divisor_support"])
    boundary = [(frac(row["q"]), MonomialIdeal.make(d, row["generators"]))
                for row in obj["boundary"]]
    center = load_center(obj["center"], d)
    return AdjunctionCase.make(d, support, boundary, center,
                               load_divisor_side(obj["divisor_side"]))


def load_semicontinuity_case(obj: dict) -> SemicontinuityCase:
    pair = load_monomial_pair(obj["pair"])
    v = load_center(obj["v"], pair.d)
    w = load_center(obj["w"], pair.d)
    return SemicontinuityCase.make(pair, v, w, obj.get("codim_vw"))
