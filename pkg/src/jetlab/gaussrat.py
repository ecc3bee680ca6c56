"""Exact arithmetic in the field of Gaussian rationals.

A Gaussian rational is a complex number whose real and imaginary parts are
rational.  Every coefficient in this package lives in this field; there is
no floating point anywhere in the core.  Both parts are stored as
``fractions.Fraction``, which keeps them in lowest terms with a positive
denominator, so canonical form is automatic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


class GaussRat:
    """A Gaussian rational ``re + im*i`` with exact rational parts.

    Instances are immutable by convention: no method mutates ``re`` or
    ``im``, so values can be shared freely (dict values, dataclass fields,
    across threads).
    """

    __slots__ = ("re", "im")

    def __init__(self, re: Rational = 0, im: Rational = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- coercion ----------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "GaussRat | None":
        if isinstance(x, GaussRat):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussRat(x)
        return None

    # -- predicates --------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def is_unimodular(self) -> bool:
        """True iff re^2 + im^2 == 1 exactly."""
        return self.norm_sq() == 1

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(o.re - self.re, o.im - self.im)

    def __neg__(self) -> "GaussRat":
        return GaussRat(-self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRat(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm_sq()
        if not n:
            raise ZeroDivisionError("zero divisor")
        return GaussRat(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def conjugate(self) -> "GaussRat":
        return GaussRat(self.re, -self.im)

    def inverse(self) -> "GaussRat":
        return ONE / self

    def norm_sq(self) -> Fraction:
        """re^2 + im^2, an exact rational."""
        return self.re * self.re + self.im * self.im

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    # -- conversions ---------------------------------------------------------

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        if not self.im:
            return str(self.re)
        if self.im > 0:
            sign, mag = "+", self.im
        else:
            sign, mag = "-", -self.im
        imag = "i" if mag == 1 else f"{mag}i"
        if not self.re:
            return imag if sign == "+" else f"-{imag}"
        return f"{self.re}{sign}{imag}"


ZERO = GaussRat(0)
ONE = GaussRat(1)
I = GaussRat(0, 1)


def as_gauss(x) -> GaussRat:
    """Coerce an int, Fraction, or GaussRat; raise TypeError otherwise."""
    g = GaussRat._coerce(x)
    if g is None:
        raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")
    return g
