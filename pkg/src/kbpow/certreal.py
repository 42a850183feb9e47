"""Ball arithmetic with a certified error radius.

:class:`CertReal` is a thin immutable carrier around an Arb ball
(``flint.arb``): the true real lies in ``[value - radius, value + radius]``.
Every operation is evaluated under an explicit working precision, so the
global flint context is never left modified.

Flint keeps its precision in a process-global context. Objects here are
immutable and safe to share, but evaluation is not thread safe; use
processes for parallel work.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from flint import arb, ctx, fmpq, fmpz

DEFAULT_PRECISION = 128
MAX_PRECISION = 2**20


class PrecisionError(ArithmeticError):
    """Raised when an enclosure is too wide to decide a required sign or integer part."""


def to_arb(x) -> arb:
    """Exact-as-possible conversion of ints, Fractions, decimal strings and floats."""
    if isinstance(x, arb):
        return x
    if isinstance(x, CertReal):
        return x.ball
    if isinstance(x, (int, fmpz)):
        return arb(x)
    if isinstance(x, str):
        x = Fraction(x)
    if isinstance(x, Rational):
        return arb(fmpq(int(x.numerator), int(x.denominator)))
    if isinstance(x, float):
        return arb(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a ball")


def arb_to_fraction(x: arb) -> Fraction:
    """Exact value of an exact (zero-radius) dyadic ball."""
    man, exp = x.man_exp()
    man, exp = int(man), int(exp)
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


class CertReal:
    """A real number known to lie in a closed ball.

    ``value`` and ``radius`` are exact dyadic Arb numbers; ``precision_bits``
    is the working precision used for operations that start from this value.
    """

    __slots__ = ("ball", "precision_bits")

    def __init__(self, ball, precision_bits: int = DEFAULT_PRECISION):
        if not 2 <= precision_bits <= MAX_PRECISION:
            raise ValueError(f"precision_bits out of range: {precision_bits}")
        with ctx.workprec(precision_bits):
            b = to_arb(ball)
            # re-rounding keeps mid within precision_bits; radius absorbs the error
            b = +b
        if b.is_nan() or not b.is_finite():
            raise ArithmeticError("non-finite enclosure")
        object.__setattr__(self, "ball", b)
        object.__setattr__(self, "precision_bits", int(precision_bits))

    def __setattr__(self, name, value):
        raise AttributeError("CertReal is immutable")

    @classmethod
    def exact(cls, x, precision_bits: int = DEFAULT_PRECISION) -> CertReal:
        return cls(x, precision_bits)

    @classmethod
    def from_mid_rad(cls, mid, rad, precision_bits: int = DEFAULT_PRECISION) -> CertReal:
        with ctx.workprec(precision_bits):
            m = to_arb(mid)
            r = to_arb(rad)
            if r < 0:
                raise ValueError("radius must be nonnegative")
            return cls(m + arb(0, r.abs_upper()), precision_bits)

    @property
    def value(self) -> arb:
        return self.ball.mid()

    @property
    def radius(self) -> arb:
        return self.ball.rad()

    def _endpoint(self, side: str) -> arb:
        # endpoints are rounded outward at the ambient precision, so widen it
        with ctx.workprec(self.precision_bits + 32):
            return getattr(self.ball, side)()

    @property
    def lower(self) -> Fraction:
        return arb_to_fraction(self._endpoint("lower"))

    @property
    def upper(self) -> Fraction:
        return arb_to_fraction(self._endpoint("upper"))

    def lower_float(self) -> float:
        return float(self._endpoint("lower"))

    def upper_float(self) -> float:
        return float(self._endpoint("upper"))

    def __float__(self) -> float:
        return float(self.ball.mid())

    def __repr__(self) -> str:
        return f"CertReal({self.ball.str(20, radius=True)}, prec={self.precision_bits})"

    def str(self, digits: int = 20) -> str:
        return self.ball.str(digits, radius=True)

    # -- predicates ----------------------------------------------------------

    def contains(self, x) -> bool:
        if isinstance(x, (int, str, Rational)):
            q = Fraction(x)
            return self.lower <= q <= self.upper
        with ctx.workprec(self.precision_bits + 32):
            return self.ball.contains(to_arb(x))

    def contains_ball(self, other: CertReal) -> bool:
        return self.ball.contains(other.ball)

    def is_positive(self) -> bool:
        """True only if every point of the enclosure is > 0."""
        return self.ball > 0

    def is_negative(self) -> bool:
        return self.ball < 0

    def certainly_lt(self, other) -> bool:
        if isinstance(other, (int, str, Rational)):
            return self.upper < Fraction(other)
        with ctx.workprec(self.precision_bits + 32):
            return self.ball < to_arb(other)

    def certainly_gt(self, other) -> bool:
        if isinstance(other, (int, str, Rational)):
            return self.lower > Fraction(other)
        with ctx.workprec(self.precision_bits + 32):
            return self.ball > to_arb(other)

    def rel_accuracy_bits(self) -> int:
        return self.ball.rel_accuracy_bits()

    # -- arithmetic ----------------------------------------------------------

    def _prec_with(self, other) -> int:
        if not isinstance(other, CertReal):
            return self.precision_bits
        # exact operands do not limit the precision of the result
        a_exact, b_exact = self.ball.is_exact(), other.ball.is_exact()
        if a_exact and b_exact:
            return max(self.precision_bits, other.precision_bits)
        if a_exact:
            return other.precision_bits
        if b_exact:
            return self.precision_bits
        return min(self.precision_bits, other.precision_bits)

    def _binary(self, other, op) -> CertReal:
        prec = self._prec_with(other)
        with ctx.workprec(prec):
            return CertReal(op(self.ball, to_arb(other)), prec)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __radd__(self, other):
        return self._binary(other, lambda a, b: b + a)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __rmul__(self, other):
        return self._binary(other, lambda a, b: b * a)

    def __truediv__(self, other):
        if isinstance(other, CertReal) and other.ball.contains(0):
            raise ZeroDivisionError("divisor enclosure contains 0")
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        if self.ball.contains(0):
            raise ZeroDivisionError("divisor enclosure contains 0")
        return self._binary(other, lambda a, b: b / a)

    def __neg__(self):
        with ctx.workprec(self.precision_bits):
            return CertReal(-self.ball, self.precision_bits)

    def __pos__(self):
        return self

    def __abs__(self):
        with ctx.workprec(self.precision_bits + 32):
            lo, hi = self.ball.abs_lower(), self.ball.abs_upper()
            return CertReal(lo.union(hi), self.precision_bits)

    def __pow__(self, e: int):
        return pow_certified(self, e)

    def log(self) -> CertReal:
        return log_certified(self)

    def with_precision(self, precision_bits: int) -> CertReal:
        return CertReal(self.ball, precision_bits)


def log_certified(x: CertReal) -> CertReal:
    """Natural logarithm; the enclosure of ``x`` must be strictly positive."""
    if not x.is_positive():
        raise ValueError(f"log of an enclosure touching or below 0: {x!r}")
    with ctx.workprec(x.precision_bits):
        return CertReal(x.ball.log(), x.precision_bits)


def pow_certified(x: CertReal, e: int) -> CertReal:
    """Integer power with propagated radius. ``x**0`` is exactly 1."""
    e = int(e)
    if e == 0:
        return CertReal(1, x.precision_bits)
    if e < 0 and x.ball.contains(0):
        raise ZeroDivisionError("negative power of an enclosure containing 0")
    with ctx.workprec(x.precision_bits):
        return CertReal(x.ball ** e, x.precision_bits)


def exp_certified(x: CertReal) -> CertReal:
    with ctx.workprec(x.precision_bits):
        return CertReal(x.ball.exp(), x.precision_bits)


def sqrt_certified(x: CertReal) -> CertReal:
    if x.is_negative():
        raise ValueError("sqrt of a negative enclosure")
    with ctx.workprec(x.precision_bits):
        return CertReal(x.ball.sqrt(), x.precision_bits)


def const_log2(precision_bits: int) -> CertReal:
    with ctx.workprec(precision_bits):
        return CertReal(arb.const_log2(), precision_bits)
