"""Certified continued fractions of ball-enclosed reals.

The floor/reciprocal loop runs in exact rational arithmetic on both
endpoints of the enclosure.  Numbers sharing a prefix of partial quotients
form an interval, so every quotient on which the two endpoint expansions
agree (and which is not the terminal quotient of either) is correct for the
enclosed real.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from flint import arb, ctx

from .certreal import MAX_PRECISION, CertReal, PrecisionError


class CFCertificationError(ArithmeticError):
    def __init__(self, index: int, precision_bits: int):
        super().__init__(
            f"partial quotient {index} not certified at {precision_bits} bits (cap reached)"
        )
        self.index = index
        self.precision_bits = precision_bits


@dataclass(frozen=True)
class CFExpansion:
    partial_quotients: tuple[int, ...]
    certified_len: int

    def __post_init__(self):
        if self.certified_len > len(self.partial_quotients):
            raise ValueError("certified_len exceeds the number of quotients")
        if any(a < 1 for a in self.partial_quotients[1:]):
            raise ValueError("partial quotients after the first must be >= 1")


@dataclass(frozen=True)
class Convergent:
    index: int
    p: int
    q: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


def _endpoint_quotients(x: Fraction, limit: int) -> tuple[list[int], bool]:
    """Quotients of a rational; the flag is True if the expansion terminated."""
    out = []
    while len(out) < limit:
        a = math.floor(x)
        out.append(a)
        x -= a
        if x == 0:
            return out, True
        x = 1 / x
    return out, False


def certified_prefix(x: CertReal, limit: int) -> list[int]:
    """Partial quotients of ``x`` guaranteed by its enclosure (at most ``limit``)."""
    lo_q, lo_done = _endpoint_quotients(x.lower, limit + 1)
    hi_q, hi_done = _endpoint_quotients(x.upper, limit + 1)
    # the terminal quotient of a rational endpoint sits on a cylinder boundary
    if lo_done:
        lo_q = lo_q[:-1]
    if hi_done:
        hi_q = hi_q[:-1]
    out = []
    for a, b in zip(lo_q, hi_q):
        if a != b:
            break
        out.append(a)
    return out[:limit]


def expand(
    x: CertReal,
    count: int,
    refiner: Callable[[int], CertReal] | None = None,
    max_bits: int = MAX_PRECISION,
) -> CFExpansion:
    """At least ``count`` certified partial quotients of ``x``.

    When the enclosure is too wide, ``refiner(bits)`` is called with doubled
    precision to recompute ``x``; without a refiner, or once ``max_bits`` is
    exceeded, :class:`CFCertificationError` names the first uncertified index.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if x.radius == 0:
        raise ValueError("expected an enclosure of an irrational (nonzero radius)")
    while True:
        quotients = certified_prefix(x, count)
        if len(quotients) >= count:
            return CFExpansion(tuple(quotients), len(quotients))
        bits = 2 * x.precision_bits
        if refiner is None or bits > max_bits:
            raise CFCertificationError(len(quotients), x.precision_bits)
        x = refiner(bits)


def convergents(cf: CFExpansion | Sequence[int], up_to: int | None = None) -> list[Convergent]:
    """Convergents ``p_l / q_l`` for ``0 <= l <= up_to`` (index 0 is ``a_0 / 1``)."""
    if isinstance(cf, CFExpansion):
        quotients, certified = cf.partial_quotients, cf.certified_len
    else:
        quotients = tuple(cf)
        certified = len(quotients)
    if up_to is None:
        up_to = certified - 1
    if up_to >= certified:
        raise IndexError(f"convergent {up_to} needs more than {certified} certified quotients")
    p_prev, p = 1, quotients[0]
    q_prev, q = 0, 1
    out = [Convergent(0, p, q)]
    for ell in range(1, up_to + 1):
        a = quotients[ell]
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        out.append(Convergent(ell, p, q))
    return out


def nearest_int_distance(x: CertReal) -> CertReal:
    """Certified ``||x||``, the distance from ``x`` to the nearest integer."""
    prec = x.precision_bits
    with ctx.workprec(prec + 32):
        if not x.ball.rad() < arb(1) / 4:
            raise PrecisionError("enclosure too wide for a nearest-integer distance")
        n = int(x.ball.mid().floor().unique_fmpz())
        frac = x.ball - n
        # frac lies in roughly [-1/4, 5/4); pick the nearest of 0 and 1
        if frac < arb(1) / 2:
            d = frac
        elif frac > arb(1) / 2:
            d = frac - 1
        elif frac.is_exact():
            # exactly a half-integer: no extra precision can change this
            return CertReal(arb(1) / 2, prec)
        else:
            raise PrecisionError("enclosure straddles a half-integer")
        lo, hi = d.abs_lower(), d.abs_upper()
        return CertReal(lo.union(hi), prec)
