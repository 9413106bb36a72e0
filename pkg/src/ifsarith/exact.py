"""Exact scalars: arbitrary-precision rationals and two-radical sums.

Rationals are stdlib ``fractions.Fraction`` (already canonical: reduced,
positive denominator).  The other scalar kind is ``SqrtSum2``, the value
``sqrt(a) + sqrt(b)`` for nonnegative rational radicands ``a >= b``.

Every comparison is decided exactly.  Rational comparisons reduce to
cross multiplication; radical comparisons reduce to at most two squarings
with explicit sign tracking.  Before the algebraic procedure runs, a
dyadic enclosure obtained from integer square roots (``math.isqrt``) is
tried, so sorting large collections of radical endpoints stays cheap.
The enclosure is a proved bound, never an estimate: no comparison ever
depends on floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

LT, EQ, GT = -1, 0, 1

# enclosure precisions (bits) tried before the algebraic decision
_ENC_COARSE = 64
_ENC_FINE = 256


class NegativeRadicand(ValueError):
    """A square root of a negative rational was requested."""


def sign(x) -> int:
    if x > 0:
        return GT
    if x < 0:
        return LT
    return EQ


def cmp_rational(x: Fraction, y: Fraction) -> int:
    """Exact three-way comparison of two rationals: -1, 0 or +1."""
    return sign(x - y)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse ``P/Q`` or a decimal literal as an exact rational.

    Decimal inputs are read digit-exactly (``0.45`` -> 9/20), never via a
    binary float.
    """
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def decimal_str(x: Fraction, places: int = 12) -> str:
    """Deterministic decimal rendering (advisory only, half-up rounding)."""
    x = as_fraction(x)
    neg = x < 0
    n, d = abs(x.numerator), x.denominator
    q, r = divmod(n * 10**places, d)
    if 2 * r >= d:
        q += 1
    digits = str(q).rjust(places + 1, "0")
    whole, frac = digits[:-places], digits[-places:]
    frac = frac.rstrip("0")
    out = whole + ("." + frac if frac else "")
    return "-" + out if neg and q else out


def sqrt_exact(x: Fraction) -> Fraction | None:
    """Exact square root of a rational, or None when it is irrational."""
    x = as_fraction(x)
    if x < 0:
        raise NegativeRadicand(f"sqrt of negative rational {x}")
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def floor_sqrt_scaled(x: Fraction, bits: int) -> int:
    """floor(sqrt(x) * 2**bits), exact via isqrt(n*d*4^bits) // d."""
    n, d = x.numerator, x.denominator
    return isqrt((n * d) << (2 * bits)) // d


_floor_sqrt_scaled = floor_sqrt_scaled


def _sign_r_plus_s_sqrt(r: Fraction, s: Fraction, x: Fraction) -> int:
    """Exact sign of r + s*sqrt(x) for rational r, s and x >= 0."""
    if x == 0 or s == 0:
        return sign(r)
    if s > 0:
        if r >= 0:
            return GT
        return sign(s * s * x - r * r)
    if r <= 0:
        return LT
    return sign(r * r - s * s * x)


def _cmp_sqrt_sums_exact(a1, b1, a2, b2) -> int:
    # sign of (sqrt(a1)+sqrt(b1)) - (sqrt(a2)+sqrt(b2)).  Both sides are
    # nonnegative, so the sign equals the sign of the squared difference
    #   d + 2*sqrt(P1) - 2*sqrt(P2),  d = (a1+b1)-(a2+b2), Pi = product.
    d = (a1 + b1) - (a2 + b2)
    p1 = a1 * b1
    p2 = a2 * b2
    if p1 == p2:
        return sign(d)
    if p2 == 0:
        return _sign_r_plus_s_sqrt(d, Fraction(2), p1)
    if p1 == 0:
        return -_sign_r_plus_s_sqrt(-d, Fraction(2), p2)
    s1 = _sign_r_plus_s_sqrt(d, Fraction(2), p1)
    if s1 < 0:
        return LT
    if s1 == 0:
        return LT  # d + 2*sqrt(P1) = 0 while 2*sqrt(P2) > 0
    # second squaring: (d + 2*sqrt(P1))^2 vs 4*P2
    g = d * d + 4 * p1 - 4 * p2
    return _sign_r_plus_s_sqrt(g, 4 * d, p1)


class SqrtSum2:
    """The exact value sqrt(a) + sqrt(b), radicands stored with a >= b.

    Instances are immutable value objects.  Equality and ordering are by
    numeric value, not by representation: ``SqrtSum2(8, 0)`` equals
    ``SqrtSum2(2, 2)``.  Consequently instances are unhashable.
    """

    __slots__ = ("a", "b", "_enc")

    def __init__(self, a, b=0):
        a = as_fraction(a)
        b = as_fraction(b)
        if a < 0 or b < 0:
            raise NegativeRadicand(f"sqrt({a}) + sqrt({b}) has a negative radicand")
        if a < b:
            a, b = b, a
        self.a = a
        self.b = b
        self._enc = None  # lazy {bits: floor(value * 2**bits)}

    @classmethod
    def from_rational(cls, r) -> "SqrtSum2":
        """Embed a nonnegative rational r as sqrt(r^2) + sqrt(0)."""
        r = as_fraction(r)
        if r < 0:
            raise ValueError(f"cannot embed negative rational {r} as a radical sum")
        return cls(r * r, 0)

    def as_rational(self) -> Fraction | None:
        """The exact rational value, when both radicands are perfect squares."""
        ra = sqrt_exact(self.a)
        if ra is None:
            return None
        rb = sqrt_exact(self.b)
        if rb is None:
            return None
        return ra + rb

    def is_zero(self) -> bool:
        return self.a == 0

    def scaled_by_sqrt(self, r) -> "SqrtSum2":
        """Multiply by sqrt(r), r >= 0 rational: sqrt(r)*(sqrt(a)+sqrt(b))."""
        r = as_fraction(r)
        if r < 0:
            raise NegativeRadicand(f"scale factor sqrt({r})")
        return SqrtSum2(r * self.a, r * self.b)

    def floor_scaled(self, bits: int) -> int:
        """Proved bound: value*2**bits lies in [f, f+2) for the returned f."""
        if self._enc is None:
            self._enc = {}
        f = self._enc.get(bits)
        if f is None:
            f = _floor_sqrt_scaled(self.a, bits) + _floor_sqrt_scaled(self.b, bits)
            self._enc[bits] = f
        return f

    def cmp(self, other: "SqrtSum2") -> int:
        if not isinstance(other, SqrtSum2):
            raise TypeError(f"cannot compare SqrtSum2 with {type(other).__name__}")
        if self.a == other.a and self.b == other.b:
            return EQ
        for bits in (_ENC_COARSE, _ENC_FINE):
            fs = self.floor_scaled(bits)
            fo = other.floor_scaled(bits)
            if fs >= fo + 2:
                return GT
            if fs + 2 <= fo:
                return LT
        return _cmp_sqrt_sums_exact(self.a, self.b, other.a, other.b)

    def approx_decimal(self, places: int = 12) -> str:
        """Advisory decimal rendering from an integer-sqrt enclosure."""
        bits = 4 * places + 16
        f = self.floor_scaled(bits)
        return decimal_str(Fraction(f + 1, 2**bits), places)

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, SqrtSum2):
            return NotImplemented
        return self.cmp(other) == 0

    def __ne__(self, other):
        if not isinstance(other, SqrtSum2):
            return NotImplemented
        return self.cmp(other) != 0

    __hash__ = None  # value-based equality across representations

    def __repr__(self):
        return f"SqrtSum2({format_rational(self.a)}, {format_rational(self.b)})"

    def __str__(self):
        r = self.as_rational()
        if r is not None:
            return format_rational(r)
        return f"sqrt({format_rational(self.a)})+sqrt({format_rational(self.b)})"


def cmp_sqrt2(p: SqrtSum2, q: SqrtSum2) -> int:
    """Exact ordering of sqrt(p.a)+sqrt(p.b) vs sqrt(q.a)+sqrt(q.b)."""
    return p.cmp(q)
