"""Certified dominant root of x^k - x^(k-1) - ... - 1 and derived quantities.

The dominant root ``alpha`` of ``psi_k`` lies in ``(2(1 - 2^-k), 2)``.  Since
``psi_k(x) (x - 1) = x^(k+1) - 2 x^k + 1``, the sign of ``psi_k`` on that
bracket equals the sign of ``f(x) = x^k (x - 2) + 1``, which is increasing
there.  Bisection followed by precision-doubling Newton gives a midpoint; a
sign change of ``f`` across the returned ball certifies it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from flint import arb, ctx

from .certreal import (
    MAX_PRECISION,
    CertReal,
    PrecisionError,
    log_certified,
    pow_certified,
)
from .kbonacci import SeqTable

log = logging.getLogger(__name__)

DEFAULT_ROOT_PRECISION = 256


class CertificationError(ArithmeticError):
    """The requested enclosure could not be certified below the precision cap."""


def _f(x: arb, k: int) -> arb:
    return x**k * (x - 2) + 1


def _fprime(x: arb, k: int) -> arb:
    return x ** (k - 1) * ((k + 1) * x - 2 * k)


def psi_literal(x, k: int):
    """``x^k - x^(k-1) - ... - x - 1`` summed term by term (test oracle)."""
    acc = x**k
    for i in range(k):
        acc = acc - x**i
    return acc


def psi_rational(x, k: int):
    """``(x^(k+1) - 2 x^k + 1) / (x - 1)``, the k-term-free form of psi_k."""
    return (x ** (k + 1) - 2 * x**k + 1) / (x - 1)


@dataclass(frozen=True)
class DominantRoot:
    k: int
    alpha: CertReal

    @property
    def precision_bits(self) -> int:
        return self.alpha.precision_bits


def _bracket(k: int) -> tuple[arb, arb]:
    lo = 2 - arb(2) ** (1 - k)
    return lo, arb(2)


def _try_root(k: int, prec: int) -> CertReal | None:
    # x - 2 is about 2^-k, so about k bits cancel when evaluating f
    work = prec + k + 32
    with ctx.workprec(work):
        lo, hi = _bracket(k)
        # bisection until the bracket is ~2^-60 wide or the midpoint sign is undecidable
        for _ in range(60 + k):
            mid = (lo + hi) / 2
            fm = _f(mid, k)
            if fm > 0:
                hi = mid
            elif fm < 0:
                lo = mid
            else:
                break
            if (hi - lo) < arb(2) ** -60:
                break
        x = ((lo + hi) / 2).mid()

    # Newton, doubling the precision each step
    p = 64
    while True:
        p = min(2 * p, work)
        with ctx.workprec(p):
            x = (x - _f(x, k) / _fprime(x, k)).mid()
        if p == work:
            break
    with ctx.workprec(work):
        for _ in range(2):
            x = (x - _f(x, k) / _fprime(x, k)).mid()

        r = arb(2) ** -(prec - 10)
        left, right = x - r, x + r
        blo, bhi = _bracket(k)
        if not (left > blo and right < bhi):
            return None
        if not (_f(left, k) < 0 and _f(right, k) > 0):
            return None
    return CertReal.from_mid_rad(x, r, prec)


# (k, precision_bits) -> DominantRoot; values are deterministic, so racing writers agree
_ROOT_MEMO: dict[tuple[int, int], DominantRoot] = {}


def prime_root(root: DominantRoot) -> None:
    """Seed the in-process memo, e.g. with a root loaded from disk."""
    _ROOT_MEMO[(root.k, root.precision_bits)] = root


def clear_root_memo() -> None:
    _ROOT_MEMO.clear()


def dominant_root(k: int, precision_bits: int = DEFAULT_ROOT_PRECISION) -> DominantRoot:
    """Certified enclosure of the root of psi_k in ``(2(1-2^-k), 2)``.

    The returned radius is at most ``2^-(precision_bits - 8)``.  If the sign
    change cannot be certified the internal precision is doubled, up to
    :data:`~kbpow.certreal.MAX_PRECISION` bits.
    """
    if int(k) != k or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    if precision_bits < 64:
        raise ValueError("precision_bits must be >= 64")
    key = (int(k), int(precision_bits))
    hit = _ROOT_MEMO.get(key)
    if hit is not None:
        return hit
    root = _compute_root(*key)
    _ROOT_MEMO[key] = root
    return root


def _compute_root(k: int, precision_bits: int) -> DominantRoot:
    prec = precision_bits
    while prec <= MAX_PRECISION:
        alpha = _try_root(int(k), prec)
        if alpha is not None:
            if prec != precision_bits:
                alpha = alpha.with_precision(precision_bits)
            return DominantRoot(int(k), alpha)
        log.info("root certification failed for k=%d at %d bits; doubling", k, prec)
        prec *= 2
    raise CertificationError(f"could not certify the dominant root for k={k}")


def g_value(root: DominantRoot) -> CertReal:
    """``g(alpha, k) = (alpha - 1) / (2 + (k + 1)(alpha - 2))``."""
    a = root.alpha
    return (a - 1) / (2 + (root.k + 1) * (a - 2))


def binet_residual(k: int, n: int, table: SeqTable, root: DominantRoot) -> CertReal:
    """Certified ``|F_n - g(alpha, k) alpha^(n-1)|``.

    Raises :class:`PrecisionError` if the enclosure straddles 1/2, since the
    comparison against 1/2 is then undecided.
    """
    if table.k != k or root.k != k:
        raise ValueError("table, root and k disagree")
    if n < 1:
        raise ValueError("n must be >= 1")
    fn = table[n]
    res = abs(fn - g_value(root) * pow_certified(root.alpha, n - 1))
    if res.contains(CertReal.exact(1) / 2):
        raise PrecisionError(f"residual enclosure for k={k}, n={n} straddles 1/2")
    return res


def delta_eta_check(k: int, j: int, root: DominantRoot) -> tuple[CertReal, CertReal, bool]:
    """Certified ``delta_j = alpha^(j-1) - 2^(j-1)`` and ``eta = g - 1/2``.

    The flag is True when both ``|delta_j| < 2^j / 2^(k/2)`` and
    ``|eta| < 2k / 2^k`` hold on the whole enclosure.
    """
    if root.k != k:
        raise ValueError("root computed for a different k")
    prec = root.precision_bits
    two_pow_k = CertReal(arb(2), prec) ** k
    with ctx.workprec(prec):
        sqrt_2k = CertReal(arb(2) ** (arb(k) / 2), prec)
    if not (2 <= j and sqrt_2k.certainly_gt(j)):
        raise ValueError("need 2 <= j < 2^(k/2)")
    delta = pow_certified(root.alpha, j - 1) - (1 << (j - 1))
    eta = g_value(root) - CertReal.exact(1) / 2
    ok = abs(delta).certainly_lt((CertReal(1 << j, prec) / sqrt_2k).ball) and abs(eta).certainly_lt(
        (CertReal(2 * k, prec) / two_pow_k).ball
    )
    return delta, eta, bool(ok)


def log_alpha(root: DominantRoot) -> CertReal:
    return log_certified(root.alpha)
