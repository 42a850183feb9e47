"""Dujella-Petho style reduction and its two-stage use for F_n + F_m = 2^t.

Given ``0 < m*gamma - n + mu < A * B^-k`` with ``m <= M``, a convergent
``p/q`` of ``gamma`` with ``q > 6M`` and
``eps = ||mu q|| - M ||gamma q|| > 0`` rules out every solution with
``k >= log(A q / eps) / log B``.

Convergents are indexed from 0 (``p_0/q_0 = a_0/1``).  The default is
index 119, i.e. the 120th convergent when ``a_0`` is counted as the first.
"""

from __future__ import annotations

import enum
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebraics import dominant_root, g_value
from .bounds import absolute_n_cap
from .certreal import MAX_PRECISION, CertReal, PrecisionError, const_log2, log_certified
from .contfrac import CFCertificationError, Convergent, convergents, expand, nearest_int_distance

log = logging.getLogger(__name__)

DEFAULT_ELL = 119
REDUCTION_K_RANGE = (3, 321)
DEFAULT_GAP_MAX = 843
STAGE1_A = Fraction(36, 5)
STAGE2_A = Fraction(2)
STAGE2_B = Fraction(13, 10)
DEFAULT_ADVANCE = 5


class Status(str, enum.Enum):
    SUCCESS = "success"
    EPSILON_NONPOSITIVE = "epsilon_nonpositive"
    Q_TOO_SMALL = "q_too_small"


class ReductionError(ArithmeticError):
    pass


def _as_cert(x, prec: int) -> CertReal:
    if isinstance(x, CertReal):
        return x
    if isinstance(x, float):
        x = Fraction(repr(x))
    return CertReal(x, prec)


@dataclass(frozen=True)
class ReductionInput:
    M: int
    gamma: CertReal
    mu: CertReal
    A: object = 1
    B: object = 2

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 1:
            raise ValueError("M must be a positive integer")
        object.__setattr__(self, "M", int(self.M))
        prec = self.precision_bits
        if not _as_cert(self.A, prec).is_positive():
            raise ValueError("A must be > 0")
        if not _as_cert(self.B, prec).certainly_gt(1):
            raise ValueError("B must be > 1")

    @property
    def precision_bits(self) -> int:
        return min(self.gamma.precision_bits, self.mu.precision_bits)


@dataclass(frozen=True)
class ReductionResult:
    ell_used: int
    q: int
    epsilon: CertReal | None
    bound: float | None
    status: Status
    start_ell: int

    @property
    def ok(self) -> bool:
        return self.status is Status.SUCCESS

    @property
    def advanced(self) -> bool:
        """True if the engine had to move past the requested convergent."""
        return self.ell_used != self.start_ell

    @property
    def epsilon_lower(self) -> float | None:
        return None if self.epsilon is None else self.epsilon.lower_float()


def epsilon(inp: ReductionInput, conv: Convergent) -> CertReal:
    """``||mu q|| - M ||gamma q||`` as a ball; its lower endpoint is the conservative value."""
    q = conv.q
    return nearest_int_distance(inp.mu * q) - inp.M * nearest_int_distance(inp.gamma * q)


def lemma_bound(a, b, q: int, eps_lower: float | Fraction | CertReal, prec: int = 256) -> float:
    """Upper endpoint of ``log(A q / eps) / log B``, as a float."""
    a_c, b_c = _as_cert(a, prec), _as_cert(b, prec)
    if isinstance(eps_lower, CertReal):
        e = CertReal(eps_lower.lower, prec)
    else:
        e = _as_cert(eps_lower, prec)
    val = log_certified(a_c * q / e) / log_certified(b_c)
    return val.upper_float()


def dujella_petho(
    inp: ReductionInput,
    start_ell: int = 1,
    max_ell: int | None = None,
    convs: list[Convergent] | None = None,
    refiner=None,
) -> ReductionResult:
    """Apply the reduction lemma at the first workable convergent in ``[start_ell, max_ell]``.

    ``refiner(bits)`` may rebuild the input at higher precision when the
    continued fraction or a nearest-integer distance cannot be certified.
    """
    if start_ell < 1:
        raise ValueError("start_ell must be >= 1")
    if max_ell is None:
        max_ell = start_ell + DEFAULT_ADVANCE
    while True:
        try:
            return _dujella_petho_once(inp, start_ell, max_ell, convs)
        except (CFCertificationError, PrecisionError) as exc:
            bits = 2 * inp.precision_bits
            if refiner is None or bits > MAX_PRECISION:
                raise ReductionError(f"certification failed: {exc}") from exc
            log.info("reduction escalating to %d bits: %s", bits, exc)
            inp = refiner(bits)
            convs = None


def _dujella_petho_once(inp, start_ell, max_ell, convs) -> ReductionResult:
    if convs is None or len(convs) <= max_ell:
        cf = expand(inp.gamma, max_ell + 1)
        convs = convergents(cf, max_ell)
    six_m = 6 * inp.M
    result = None
    for ell in range(start_ell, max_ell + 1):
        conv = convs[ell]
        if conv.q <= six_m:
            result = ReductionResult(ell, conv.q, None, None, Status.Q_TOO_SMALL, start_ell)
            continue
        eps = epsilon(inp, conv)
        if eps.is_positive():
            bound = lemma_bound(inp.A, inp.B, conv.q, eps, inp.precision_bits)
            return ReductionResult(ell, conv.q, eps, bound, Status.SUCCESS, start_ell)
        result = ReductionResult(ell, conv.q, eps, None, Status.EPSILON_NONPOSITIVE, start_ell)
    return result


# -- the F_n + F_m = 2^t instance ---------------------------------------------


def default_precision(ell: int, advance: int = DEFAULT_ADVANCE) -> int:
    """``64 + 10 * (number of convergents needed)`` bits."""
    return 64 + 10 * (ell + advance + 1)


@dataclass(frozen=True)
class KContext:
    """Everything about order k that both reduction stages share."""

    k: int
    precision_bits: int
    alpha: CertReal
    log_alpha: CertReal
    g: CertReal
    gamma: CertReal
    mu: CertReal
    M: int
    convs: tuple[Convergent, ...]


def convergents_consistent(x: CertReal, convs) -> bool:
    """Determinant identity plus ``|x - p/q| < 1/q^2`` on the enclosure of ``x``."""
    prev = None
    for c in convs:
        if c.q < 1:
            return False
        if prev is not None and prev.p * c.q - c.p * prev.q != (-1) ** c.index:
            return False
        err = abs(x * c.q - c.p)
        if not err.certainly_lt(CertReal(1, x.precision_bits) / c.q):
            return False
        prev = c
    return True


def _build_context(k: int, precision_bits: int, n_convs: int, cache=None) -> KContext:
    root = cache.root(k, precision_bits) if cache is not None else dominant_root(k, precision_bits)
    la = log_certified(root.alpha)
    g = g_value(root)
    gamma = const_log2(precision_bits) / la
    mu = log_certified(1 / g) / la
    convs = None
    if cache is not None:
        convs = cache.load_convergents(k, n_convs - 1, precision_bits)
        if convs is not None and not convergents_consistent(gamma, convs):
            log.warning("cached convergents for k=%d disagree with gamma; recomputing", k)
            convs = None
    if convs is None:
        convs = convergents(expand(gamma, n_convs), n_convs - 1)
        if cache is not None:
            cache.store_convergents(k, convs, precision_bits)
    return KContext(k, precision_bits, root.alpha, la, g, gamma, mu, absolute_n_cap(k), tuple(convs))


@lru_cache(maxsize=1024)
def k_context(k: int, ell: int = DEFAULT_ELL, precision_bits: int | None = None,
              advance: int = DEFAULT_ADVANCE, cache=None) -> KContext:
    """Certified gamma_k, mu_k, M_k and convergents up to ``ell + advance``.

    Precision doubles automatically until the continued fraction certifies.
    """
    if k < 3:
        raise ValueError("the reduction is set up for k >= 3")
    prec = precision_bits or default_precision(ell, advance)
    while True:
        try:
            return _build_context(k, prec, ell + advance + 1, cache)
        except CFCertificationError:
            if 2 * prec > MAX_PRECISION:
                raise
            log.info("k=%d: continued fraction needs more than %d bits", k, prec)
            prec *= 2


def gamma_mu(k: int, precision_bits: int) -> tuple[CertReal, CertReal]:
    """``gamma_k = log 2 / log alpha`` and ``mu_k = log(1/g(alpha,k)) / log alpha``."""
    c = _build_context(k, precision_bits, 1)
    return c.gamma, c.mu


def stage1(k: int, ell: int = DEFAULT_ELL, precision_bits: int | None = None,
           advance: int = DEFAULT_ADVANCE, cache=None) -> ReductionResult:
    """Reduction of ``0 < t gamma_k - (n-1) + mu_k < 7.2 alpha^-(n-m)``; bound is on ``n - m``."""
    ctxk = k_context(k, ell, precision_bits, advance, cache)
    inp = ReductionInput(ctxk.M, ctxk.gamma, ctxk.mu, STAGE1_A, ctxk.alpha)

    def refine(bits):
        c = k_context(k, ell, bits, advance, cache)
        return ReductionInput(c.M, c.gamma, c.mu, STAGE1_A, c.alpha)

    return dujella_petho(inp, ell, ell + advance, list(ctxk.convs), refine)


def phi_value(k: int, gap: int, precision_bits: int = 256) -> CertReal:
    """``1 / (g(alpha,k) (1 + alpha^-gap))``."""
    if gap < 1:
        raise ValueError("gap must be >= 1")
    root = dominant_root(k, precision_bits)
    return 1 / (g_value(root) * (1 + root.alpha ** (-gap)))


def mu_star(ctxk: KContext, gap: int, alpha_inv_pow: CertReal | None = None) -> CertReal:
    """``log phi(k, gap) / log alpha``."""
    if alpha_inv_pow is None:
        alpha_inv_pow = ctxk.alpha ** (-gap)
    return -log_certified(ctxk.g * (1 + alpha_inv_pow)) / ctxk.log_alpha


def stage2(k: int, gap: int, ell: int = DEFAULT_ELL, precision_bits: int | None = None,
           advance: int = DEFAULT_ADVANCE, amplitude=STAGE2_A, cache=None) -> ReductionResult:
    """Reduction of ``0 < t gamma_k - (n-1) + mu*_{k,gap} < 2 * 1.3^-n``; bound is on ``n``.

    Starts from the convergent that stage 1 used for this k.
    """
    if gap < 1:
        raise ValueError("gap must be >= 1")
    first = stage1(k, ell, precision_bits, advance, cache)
    ctxk = k_context(k, ell, precision_bits, advance, cache)
    inp = ReductionInput(ctxk.M, ctxk.gamma, mu_star(ctxk, gap), amplitude, STAGE2_B)

    def refine(bits):
        c = k_context(k, ell, bits, advance, cache)
        return ReductionInput(c.M, c.gamma, mu_star(c, gap), amplitude, STAGE2_B)

    return dujella_petho(inp, first.ell_used, ell + advance, list(ctxk.convs), refine)


@dataclass(frozen=True)
class Stage2Summary:
    k: int
    ell_used: int
    gap_max: int
    min_epsilon: float
    argmin_gap: int
    max_bound: float
    argmax_gap: int
    failures: tuple[int, ...]
    advanced: tuple[int, ...]


def stage2_sweep_k(k: int, gap_max: int = DEFAULT_GAP_MAX, ell: int = DEFAULT_ELL,
                   precision_bits: int | None = None, advance: int = DEFAULT_ADVANCE,
                   amplitude=STAGE2_A, cache=None) -> Stage2Summary:
    """Stage 2 for every gap in ``[1, gap_max]`` at one k."""
    first = stage1(k, ell, precision_bits, advance, cache)
    ctxk = k_context(k, ell, precision_bits, advance, cache)
    convs = list(ctxk.convs)
    inv = 1 / ctxk.alpha
    pw = CertReal(1, ctxk.precision_bits)
    min_eps, arg_eps = math.inf, 0
    max_b, arg_b = -math.inf, 0
    failures, advanced = [], []
    for gap in range(1, gap_max + 1):
        pw = pw * inv
        inp = ReductionInput(ctxk.M, ctxk.gamma, mu_star(ctxk, gap, pw), amplitude, STAGE2_B)
        try:
            res = _dujella_petho_once(inp, first.ell_used, ell + advance, convs)
        except (CFCertificationError, PrecisionError):
            res = stage2(k, gap, ell, 2 * ctxk.precision_bits, advance, amplitude, cache)
        if not res.ok:
            failures.append(gap)
            continue
        if res.advanced:
            advanced.append(gap)
        e = res.epsilon_lower
        if e < min_eps:
            min_eps, arg_eps = e, gap
        if res.bound > max_b:
            max_b, arg_b = res.bound, gap
    return Stage2Summary(k, first.ell_used, gap_max, min_eps, arg_eps, max_b, arg_b,
                         tuple(failures), tuple(advanced))


def _pool_map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _stage1_job(args):
    k, ell, prec, advance, cache = args
    return k, stage1(k, ell, prec, advance, cache)


def _stage2_job(args):
    k, gap_max, ell, prec, advance, amplitude, cache = args
    return stage2_sweep_k(k, gap_max, ell, prec, advance, amplitude, cache)


def stage1_sweep(k_values, ell: int = DEFAULT_ELL, precision_bits: int | None = None,
                 advance: int = DEFAULT_ADVANCE, workers: int = 1,
                 cache=None) -> list[tuple[int, ReductionResult]]:
    """``(k, stage1(k))`` pairs in the order of ``k_values``."""
    jobs = [(k, ell, precision_bits, advance, cache) for k in k_values]
    return _pool_map(_stage1_job, jobs, workers)


def stage2_sweep(k_values, gap_max: int = DEFAULT_GAP_MAX, ell: int = DEFAULT_ELL,
                 precision_bits: int | None = None, advance: int = DEFAULT_ADVANCE,
                 workers: int = 1, amplitude=STAGE2_A, cache=None) -> list[Stage2Summary]:
    jobs = [(k, gap_max, ell, precision_bits, advance, amplitude, cache) for k in k_values]
    return _pool_map(_stage2_job, jobs, workers)


def cutoff(bounds) -> int:
    """Largest integer not exceeding every bound, i.e. the floor of the maximum."""
    return math.floor(max(bounds))


def aggregate_bound(a, q_max: float, eps_min: float, b: float) -> float:
    """``log(A q_max / eps_min) / log B`` from range-wide extremes (floating point)."""
    return math.log(float(a) * q_max / eps_min) / math.log(b)
