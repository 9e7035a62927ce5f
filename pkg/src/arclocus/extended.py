"""Exact rationals extended with -inf and +inf.

Every codimension and every minimal log discrepancy computed by this
library lands in this type.  Arithmetic on finite values is exact
``fractions.Fraction`` arithmetic; there is no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import InputError

RationalLike = Union[int, str, Fraction]


def frac(x: RationalLike) -> Fraction:
    """Coerce an int, Fraction or "a/b" string to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError(f"expected a rational, got bool {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {x!r}") from exc
    raise InputError(f"expected a rational, got {type(x).__name__}")


@dataclass(frozen=True)
class ExtendedRational:
    """A Fraction, or one of the two infinities.

    ``sign`` is -1 for -inf, +1 for +inf and 0 for a finite value held in
    ``finite``.  The ordering is total with -inf < finite < +inf.
    """

    sign: int
    finite: Fraction = Fraction(0)

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise InputError(f"bad sign {self.sign}")

    # -- constructors -------------------------------------------------

    @staticmethod
    def of(x: Union["ExtendedRational", RationalLike]) -> "ExtendedRational":
        if isinstance(x, ExtendedRational):
            return x
        if isinstance(x, str) and x.strip() in ("-inf", "+inf", "inf"):
            return NEG_INF if x.strip() == "-inf" else POS_INF
        return ExtendedRational(0, frac(x))

    # -- predicates ---------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.sign == 0

    @property
    def is_neg_inf(self) -> bool:
        return self.sign == -1

    @property
    def is_pos_inf(self) -> bool:
        return self.sign == 1

    # -- ordering -----------------------------------------------------

    def _key(self):
        return (self.sign, self.finite if self.sign == 0 else Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExtendedRational.of(other)
        if not isinstance(other, ExtendedRational):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __lt__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExtendedRational.of(other)
        if not isinstance(other, ExtendedRational):
            return NotImplemented
        return self._key() < other._key()

    def __le__(self, other) -> bool:
        return self == other or self < other

    def __gt__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExtendedRational.of(other)
        return other < self

    def __ge__(self, other) -> bool:
        return self == other or self > other

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other) -> "ExtendedRational":
        if isinstance(other, (int, Fraction)):
            other = ExtendedRational.of(other)
        if not isinstance(other, ExtendedRational):
            return NotImplemented
        if self.sign == 0 and other.sign == 0:
            return ExtendedRational(0, self.finite + other.finite)
        if self.sign != 0 and other.sign != 0 and self.sign != other.sign:
            raise InputError("adding opposite infinities is undefined")
        return self if self.sign != 0 else other

    __radd__ = __add__

    def __neg__(self) -> "ExtendedRational":
        return ExtendedRational(-self.sign, -self.finite)

    def __sub__(self, other) -> "ExtendedRational":
        if isinstance(other, (int, Fraction)):
            other = ExtendedRational.of(other)
        return self + (-other)

    # -- serialization ------------------------------------------------

    def to_string(self) -> str:
        if self.sign == -1:
            return "-inf"
        if self.sign == 1:
            return "+inf"
        return str(self.finite)

    @staticmethod
    def from_string(s: str) -> "ExtendedRational":
        s = s.strip()
        if s == "-inf":
            return NEG_INF
        if s in ("+inf", "inf"):
            return POS_INF
        return ExtendedRational(0, frac(s))

    def __repr__(self):
        return f"ExtendedRational({self.to_string()})"


NEG_INF = ExtendedRational(-1)
POS_INF = ExtendedRational(1)
ZERO = ExtendedRational(0, Fraction(0))
