"""Matveev's lower bound and the chain of upper bounds on n in terms of k.

These are coarse magnitudes, evaluated in ordinary floating point. The
number of logarithms in Matveev's bound is called ``num_logs`` to keep it
apart from the exponent ``t`` of ``2^t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# validity threshold for x / log^2 x < A  =>  x < 2 A log^2 A
KEY_LEMMA_MIN_A = 2252750.0


@dataclass(frozen=True)
class MatveevParams:
    num_logs: int
    degree: int
    big_b: float
    heights: tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "heights", tuple(float(a) for a in self.heights))
        if self.num_logs < 1 or self.degree < 1:
            raise ValueError("num_logs and degree must be >= 1")
        if len(self.heights) != self.num_logs:
            raise ValueError("need one height bound A_j per logarithm")
        if self.big_b < 1:
            raise ValueError("B must be >= 1")
        if any(a < 0.16 for a in self.heights):
            raise ValueError("each A_j must be >= 0.16")


def matveev_exponent(params: MatveevParams) -> float:
    """``C`` such that Matveev's lower bound reads ``exp(-C)``.

    ``C = 1.4 * 30^(t+3) * t^4.5 * D^2 (1 + log D)(1 + log B) * A_1 ... A_t``.
    """
    t = params.num_logs
    d = params.degree
    c = 1.4 * 30.0 ** (t + 3) * t**4.5 * d * d * (1 + math.log(d)) * (1 + math.log(params.big_b))
    return c * math.prod(params.heights)


def first_matveev_params(k: int, n: int) -> MatveevParams:
    """Parameters for the form ``2^t alpha^-(n-1) g(alpha,k)^-1 - 1``."""
    return MatveevParams(3, k, n - 1, (k * math.log(2), 0.7, k * math.log(4 * k + 4)))


def second_matveev_params(k: int, n: int, gap: int) -> MatveevParams:
    """Parameters for the form with ``g(alpha,k)(1 + alpha^(m-n))``."""
    return MatveevParams(3, k, n - 1, (k * math.log(2), 0.7, height_bounds(k, gap)[1]))


def first_exponent_envelope(k: int, n: int) -> float:
    """The simplified envelope ``7.3e11 k^4 log n log^2 k`` of the first application."""
    return 7.3e11 * k**4 * math.log(n) * math.log(k) ** 2


def nm_gap_bound(k: int, n: float) -> float:
    """Upper bound ``1.5e12 k^4 log^2 k log n`` on ``n - m``."""
    if k < 3 or n < 2:
        raise ValueError("need k >= 3 and n >= 2")
    return 1.5e12 * k**4 * math.log(k) ** 2 * math.log(n)


def absolute_n_bound(k: int) -> float:
    """``M_k = 1.2e27 k^7 log^5 k``, the absolute bound on ``n``."""
    if k < 3:
        raise ValueError("need k >= 3")
    return 1.2e27 * k**7 * math.log(k) ** 5


def absolute_n_cap(k: int) -> int:
    """``M_k`` rounded up to an integer, as used for the reduction cap."""
    return math.ceil(absolute_n_bound(k))


def key_lemma_bound(a: float) -> float:
    """``2 A log^2 A``: any ``x > e`` with ``x / log^2 x < A`` is below it."""
    if a < KEY_LEMMA_MIN_A:
        raise ValueError(f"key lemma needs A >= {KEY_LEMMA_MIN_A}, got {a}")
    return 2 * a * math.log(a) ** 2


def final_step_a(k: int) -> float:
    """``A = 1.8e23 k^7 log^3 k`` fed into :func:`key_lemma_bound`."""
    return 1.8e23 * k**7 * math.log(k) ** 3


def height_bounds(k: int, nm_gap: int) -> tuple[float, float]:
    """The two ``A_3`` values: ``k log(4k+4)`` and ``k log(8k+8) + gap log 2``."""
    if k < 3 or nm_gap < 1:
        raise ValueError("need k >= 3 and nm_gap >= 1")
    return k * math.log(4 * k + 4), k * math.log(8 * k + 8) + nm_gap * math.log(2)


def crossover_k(k_max: int = 2000) -> int:
    """Smallest ``k >= 3`` from which ``M_k < 2^(k/2)`` holds for every larger k up to ``k_max``."""
    last_fail = 2
    for k in range(3, k_max + 1):
        if not math.log(absolute_n_bound(k)) < (k / 2) * math.log(2):
            last_fail = k
    return last_fail + 1


@dataclass(frozen=True)
class BoundChain:
    k: int

    @property
    def m_k(self) -> float:
        return absolute_n_bound(self.k)

    def nm_bound(self, n: float) -> float:
        return nm_gap_bound(self.k, n)
