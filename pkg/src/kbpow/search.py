"""Exhaustive search for F_n^(k) + F_m^(k) = 2^t and the two theorems' checks.

For a fixed n, ``2^t = F_n + F_m`` lies in ``(F_n, 2 F_n]``, which contains
exactly one power of two. Each n therefore costs a single membership probe
of ``2^t - F_n`` against the table, instead of a scan over all m.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .kbonacci import SeqTable, closed_form, generate, power_of_two_exponent

log = logging.getLogger(__name__)

_LOW64 = (1 << 64) - 1
DESK_K_RANGE = (3, 30)
DESK_N_MAX = 600
FULL_K_RANGE = (3, 321)
FULL_N_MAX = 2265


@dataclass(frozen=True, order=True)
class Solution:
    """A quadruple with ``F_n^(k) + F_m^(k) = 2^t`` and ``2 <= m < n``.

    Ordering is by ``(k, n, m, t)``.
    """

    k: int
    n: int
    m: int
    t: int

    def check(self, table: SeqTable | None = None) -> bool:
        if not 2 <= self.m < self.n:
            return False
        if table is None or table.k != self.k or table.n_max < self.n:
            table = generate(self.k, self.n)
        return table[self.n] + table[self.m] == 1 << self.t

    @property
    def n_is_t_plus_2(self) -> bool:
        return self.n == self.t + 2

    def as_tuple(self) -> tuple[int, int, int, int]:
        """``(n, m, t, k)``, the order used when quoting solutions."""
        return (self.n, self.m, self.t, self.k)


@dataclass
class SearchReport:
    k_range: tuple[int, int]
    n_max: int
    solutions: list[Solution] = field(default_factory=list)
    pairs_scanned: int = 0
    elapsed: float = 0.0

    @property
    def violations(self) -> list[Solution]:
        """Solutions with ``n != t + 2``; any entry here contradicts the main theorem."""
        return [s for s in self.solutions if not s.n_is_t_plus_2]

    @property
    def condition_failures(self) -> list[Solution]:
        return [s for s in self.solutions if not mixed_case_condition(s.n, s.m, s.t, s.k)]


def digest(x: int) -> tuple[int, int, int]:
    """128 bits of ``x`` (top and bottom 64) plus its length.

    Low bits alone are useless here: for large k many terms are powers of two.
    """
    bl = x.bit_length()
    return bl, x >> max(bl - 64, 0), x & _LOW64


def _membership_index(table: SeqTable, n_max: int) -> dict[tuple, list[int]]:
    index: dict[tuple, list[int]] = {}
    for m, fm in table.items(start=2):
        if m > n_max:
            break
        index.setdefault(digest(fm), []).append(m)
    return index


def _search_table(table: SeqTable, n_max: int) -> tuple[list[Solution], int]:
    k = table.k
    index = _membership_index(table, n_max)
    found = []
    probes = 0
    for n, fn in table.items(start=3):
        if n > n_max:
            break
        t = fn.bit_length()
        rest = (1 << t) - fn
        probes += 1
        for m in index.get(digest(rest), ()):
            # the digest may collide; confirm on the full value
            if m < n and table[m] == rest:
                found.append(Solution(k, n, m, t))
    found.sort()
    return found, probes


def search_k(k: int, n_max: int) -> list[Solution]:
    """All solutions with ``2 <= m < n <= n_max`` for one k."""
    if k < 2 or n_max < 3:
        raise ValueError("need k >= 2 and n_max >= 3")
    return _search_table(generate(k, n_max), n_max)[0]


def search_k_naive(k: int, n_max: int) -> list[Solution]:
    """All-pairs oracle for :func:`search_k`; quadratic in ``n_max``."""
    table = generate(k, n_max)
    out = []
    for n in range(3, n_max + 1):
        fn = table[n]
        for m in range(2, n):
            t = power_of_two_exponent(fn + table[m])
            if t is not None:
                out.append(Solution(k, n, m, t))
    return sorted(out)


def _search_job(args):
    k, n_max = args
    table = generate(k, n_max)
    return _search_table(table, n_max)


def search_range(k_min: int, k_max: int, n_max: int, workers: int = 1) -> SearchReport:
    """Run :func:`search_k` for every k in ``[k_min, k_max]``; results sorted by (k, n, m)."""
    if k_min < 2 or k_max < k_min:
        raise ValueError("need 2 <= k_min <= k_max")
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    start = time.perf_counter()
    jobs = [(k, n_max) for k in range(k_min, k_max + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_search_job, jobs))
    else:
        results = [_search_job(j) for j in jobs]
    report = SearchReport((k_min, k_max), n_max)
    for sols, probes in results:
        report.solutions.extend(sols)
        report.pairs_scanned += probes
    report.solutions.sort()
    report.elapsed = time.perf_counter() - start
    log.info("searched k in [%d, %d], n <= %d in %.2fs", k_min, k_max, n_max, report.elapsed)
    return report


def verify_theorem1(k_min: int = DESK_K_RANGE[0], k_max: int = DESK_K_RANGE[1],
                    n_max: int = DESK_N_MAX, workers: int = 1) -> SearchReport:
    """Search the range; counterexamples show up in ``report.violations``."""
    return search_range(k_min, k_max, n_max, workers)


# -- second theorem --------------------------------------------------------------


def printed_identity_holds(n: int, m: int, k: int) -> bool:
    """``2^(k+1) == (n-k) 2^(n-m) - (m-k)``, the relation as printed."""
    return 1 << (k + 1) == (n - k) * (1 << (n - m)) - (m - k)


def derived_identity_holds(n: int, m: int, k: int) -> bool:
    """``2^(k+1) == (n-k) 2^(n-m) + (m-k)``.

    This is what the closed forms give for ``F_n + F_m = 2^(n-2)`` with
    ``n, m`` in ``[k+2, 2k+2]``.
    """
    return 1 << (k + 1) == (n - k) * (1 << (n - m)) + (m - k)


@dataclass
class Theorem2Report:
    k: int
    low_block: list[Solution]
    high_block: list[Solution]
    printed_identity: list[tuple[int, int]]
    derived_identity: list[tuple[int, int]]
    closed_forms_ok: bool

    @property
    def ok(self) -> bool:
        return (not self.low_block and not self.high_block and not self.printed_identity
                and not self.derived_identity and self.closed_forms_ok)


def verify_theorem2_cases(k: int) -> Theorem2Report:
    """Enumerate both excluded blocks of ``(n, m)`` for one k.

    Low block: ``2 <= m < n <= k+1`` with any t.  High block:
    ``k+2 <= m < n <= 2k+2`` with ``n = t+2``.
    """
    if k < 3:
        raise ValueError("need k >= 3")
    table = generate(k, 2 * k + 2)
    closed_ok = all(table[i] == closed_form(k, i) for i in range(2, 2 * k + 3))

    low = []
    for n in range(3, k + 2):
        for m in range(2, n):
            t = power_of_two_exponent(table[n] + table[m])
            if t is not None:
                low.append(Solution(k, n, m, t))

    high, printed, derived = [], [], []
    for n in range(k + 3, 2 * k + 3):
        target = 1 << (n - 2)
        for m in range(k + 2, n):
            if table[n] + table[m] == target:
                high.append(Solution(k, n, m, n - 2))
            if printed_identity_holds(n, m, k):
                printed.append((n, m))
            if derived_identity_holds(n, m, k):
                derived.append((n, m))
    return Theorem2Report(k, low, high, printed, derived, closed_ok)


def family_member(s: int, k: int) -> Solution | None:
    """``(2^s + k, 2^s + s - 1, 2^s + k - 2, k)`` if ``k >= 2^s + s - 2``, verified exactly."""
    if s < 1:
        raise ValueError("s must be >= 1")
    if k < (1 << s) + s - 2:
        return None
    sol = Solution(k, (1 << s) + k, (1 << s) + s - 1, (1 << s) + k - 2)
    if not sol.check():
        raise ArithmeticError(f"family member failed exact verification: {sol}")
    return sol


def family_members(s_max: int, k_max: int, k_min: int = 2, n_max: int | None = None) -> list[Solution]:
    out = []
    for k in range(k_min, k_max + 1):
        for s in range(1, s_max + 1):
            sol = family_member(s, k)
            if sol is not None and (n_max is None or sol.n <= n_max):
                out.append(sol)
    return sorted(out)


def mixed_case_condition(n: int, m: int, t: int, k: int) -> bool:
    """``t - k + 2 == 2^(m+k-t-1)`` with a nonnegative exponent."""
    e = m + k - t - 1
    return e >= 0 and t - k + 2 == 1 << e


def in_mixed_block(sol: Solution) -> bool:
    k = sol.k
    return k + 2 <= sol.n <= 2 * k + 2 and 2 <= sol.m <= k + 1
