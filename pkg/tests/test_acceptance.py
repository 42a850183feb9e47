"""Acceptance criteria, one test each.

Each test stores what it measured with ``record_property("detail", ...)``
before asserting; conftest prints one PASS/FAIL line per criterion.
"""

import math
import random
import time
from fractions import Fraction

import mpmath
import pytest

from _oracles import refiner_for, synthetic_input, violations_at_or_above
from kbpow.algebraics import binet_residual, dominant_root
from kbpow.bounds import KEY_LEMMA_MIN_A
from kbpow.certreal import pow_certified
from kbpow.kbonacci import closed_form, generate, naive_terms
from kbpow.reduction import (DEFAULT_ELL, DEFAULT_GAP_MAX, REDUCTION_K_RANGE, ReductionError, cutoff,
                             dujella_petho, k_context, stage1_sweep, stage2_sweep)
from kbpow.search import (DESK_K_RANGE, DESK_N_MAX, FULL_K_RANGE, FULL_N_MAX, family_members,
                          search_k, search_k_naive, search_range, verify_theorem2_cases)

FULL_KS = range(REDUCTION_K_RANGE[0], REDUCTION_K_RANGE[1] + 1)

# pinned tolerances
Q_MIN_CLAIM = 7.7e51
Q_MAX_CLAIM = 4.2e162
EPS1_CLAIM = 2.3e-37
BOUND1_CLAIM = 843.978
EPS2_CLAIM = 5.6e-91
BOUND2_CLAIM = 2265.83
BOUND_TOL = 0.01


@pytest.fixture(scope="module")
def stage1_results():
    return stage1_sweep(FULL_KS)


@pytest.mark.criterion(1, "sequence correctness")
def test_sequences_agree(record_property):
    t0 = time.perf_counter()
    bad = []
    for k in range(2, 11):
        table = generate(k, 200)
        if table.values != naive_terms(k, 200):
            bad.append(("recurrence", k))
        bad += [("closed form", k, i) for i in range(2, 2 * k + 3) if closed_form(k, i) != table[i]]
    dt = time.perf_counter() - t0
    record_property("detail", f"mismatches={len(bad)}, {dt:.3f}s (limit 1s)")
    assert not bad and dt < 1.0


@pytest.mark.criterion(2, "Binet residual below 1/2")
def test_binet_residual(record_property):
    t0 = time.perf_counter()
    worst = 0.0
    for k in range(3, 21):
        table = generate(k, 200)
        root = dominant_root(k, 512)
        for n in range(1, 201):
            worst = max(worst, binet_residual(k, n, table, root).upper_float())
    dt = time.perf_counter() - t0
    record_property("detail", f"max certified upper endpoint={worst:.6f} (need < 0.5), {dt:.2f}s")
    assert worst < 0.5 and dt < 30


@pytest.mark.criterion(3, "growth bounds")
def test_growth_bounds(record_property):
    t0 = time.perf_counter()
    failures = []
    for k in range(3, 21):
        table = generate(k, 200)
        a = dominant_root(k, 512).alpha
        for n in range(1, 201):
            fn = table[n]
            low = pow_certified(a, n - 2)
            high = pow_certified(a, n - 1)
            # arb comparisons are True only when they hold on the whole ball
            if not (low.ball <= fn and fn <= high.ball):
                failures.append((k, n))
            if n >= 2 and fn > 1 << (n - 2):
                failures.append((k, n, "2^(n-2)"))
    dt = time.perf_counter() - t0
    record_property("detail", f"failures={failures[:5]}, {dt:.2f}s")
    assert not failures and dt < 30


@pytest.mark.criterion(4, "convergent extremes at full scale")
def test_convergent_extremes(record_property, stage1_results):
    qs = {k: k_context(k).convs[DEFAULT_ELL].q for k in FULL_KS}
    kmin = min(qs, key=qs.get)
    kmax = max(qs, key=qs.get)
    record_property(
        "detail",
        f"index {DEFAULT_ELL} (0-based): min q={float(qs[kmin]):.4e} at k={kmin} (need > {Q_MIN_CLAIM:.1e}), "
        f"max q={float(qs[kmax]):.4e} at k={kmax} (need < {Q_MAX_CLAIM:.1e})")
    assert qs[kmax] < Q_MAX_CLAIM
    assert qs[kmin] > Q_MIN_CLAIM


@pytest.mark.criterion(5, "stage-1 reduction at full scale")
def test_stage1(record_property, stage1_results):
    res = dict(stage1_results)
    failed = [k for k, r in res.items() if not r.ok]
    eps = {k: r.epsilon_lower for k, r in res.items() if r.ok}
    bnd = {k: r.bound for k, r in res.items() if r.ok}
    ke, kb = min(eps, key=eps.get), max(bnd, key=bnd.get)
    record_property(
        "detail",
        f"failures={failed}, min eps={eps[ke]:.4e} at k={ke} (need > {EPS1_CLAIM}), "
        f"max bound={bnd[kb]:.3f} at k={kb} (need <= {BOUND1_CLAIM}+{BOUND_TOL}), "
        f"cutoff n-m <= {cutoff(bnd.values())}")
    assert not failed
    assert all(e > 0 for e in eps.values())
    assert eps[ke] > EPS1_CLAIM
    assert bnd[kb] <= BOUND1_CLAIM + BOUND_TOL
    assert cutoff(bnd.values()) <= 843


@pytest.mark.criterion(6, "stage-2 reduction over the full grid")
def test_stage2(record_property, stage1_results):
    t0 = time.perf_counter()
    sums = stage2_sweep(FULL_KS, DEFAULT_GAP_MAX)
    dt = time.perf_counter() - t0
    failed = [(s.k, s.failures) for s in sums if s.failures]
    se = min(sums, key=lambda s: s.min_epsilon)
    sb = max(sums, key=lambda s: s.max_bound)
    record_property(
        "detail",
        f"failures={failed}, min eps*={se.min_epsilon:.4e} at (k={se.k}, gap={se.argmin_gap}) "
        f"(need > {EPS2_CLAIM}), max bound={sb.max_bound:.2f} at (k={sb.k}, gap={sb.argmax_gap}) "
        f"(need <= {BOUND2_CLAIM}+{BOUND_TOL}), cutoff n <= {cutoff(s.max_bound for s in sums)}, {dt:.0f}s")
    assert not failed
    assert se.min_epsilon > EPS2_CLAIM
    assert sb.max_bound <= BOUND2_CLAIM + BOUND_TOL
    assert cutoff(s.max_bound for s in sums) <= 2265
    assert dt < 3600


@pytest.mark.criterion(7, "desk-scale search")
def test_desk_search(record_property):
    t0 = time.perf_counter()
    rep = search_range(*DESK_K_RANGE, DESK_N_MAX)
    found = set(rep.solutions)
    fam = set(family_members(10, DESK_K_RANGE[1], DESK_K_RANGE[0], DESK_N_MAX))
    others = found - fam
    window_ok = all(search_k(k, 120) == search_k_naive(k, 120) for k in range(3, 9))
    dt = time.perf_counter() - t0
    record_property(
        "detail",
        f"{len(found)} solutions, {len(fam)} family, {len(others)} other n=t+2, "
        f"violations={len(rep.violations)}, condition failures={len(rep.condition_failures)}, "
        f"windowed==naive: {window_ok}, {dt:.2f}s")
    assert not rep.violations and not rep.condition_failures
    assert fam <= found
    assert all(s.n_is_t_plus_2 for s in others)
    assert window_ok and dt < 60


@pytest.mark.criterion(8, "full-scale search")
def test_full_search(record_property):
    rep = search_range(*FULL_K_RANGE, FULL_N_MAX)
    record_property(
        "detail",
        f"k in {FULL_K_RANGE}, n <= {FULL_N_MAX}: {len(rep.solutions)} solutions, "
        f"violations={len(rep.violations)}, {rep.elapsed:.1f}s")
    assert not rep.violations


@pytest.mark.criterion(9, "second theorem cases and family")
def test_theorem2(record_property):
    t0 = time.perf_counter()
    bad = [k for k in range(3, 101) if not verify_theorem2_cases(k).ok]
    fam = family_members(4, 200, 2)
    fam_ok = all(s.check() for s in fam)
    dt = time.perf_counter() - t0
    record_property("detail", f"case failures={bad}, {len(fam)} family members verified={fam_ok}, {dt:.2f}s")
    assert not bad and fam_ok and dt < 60


@pytest.mark.criterion(10, "reduction soundness on random instances")
def test_reduction_soundness(record_property):
    rng = random.Random(20240611)
    t0 = time.perf_counter()
    tried = checked = 0
    bad = []
    while checked < 120:
        tried += 1
        d = rng.randint(2, 1000)
        if math.isqrt(d) ** 2 == d:
            continue
        mu = Fraction(rng.randint(1, 200), rng.randint(2, 200))
        M = rng.randint(5, 400)
        A = rng.choice([1, 2, Fraction(36, 5), 10])
        B = rng.choice([Fraction(13, 10), 2, 3])
        args = (d, mu, M, A, B)
        try:
            res = dujella_petho(synthetic_input(*args), 1, 80, refiner=refiner_for(*args))
        except ReductionError:
            continue
        if not res.ok:
            continue
        checked += 1
        hits = violations_at_or_above(*args, res.bound)
        if hits:
            bad.append((args, res.bound, hits[:3]))
    dt = time.perf_counter() - t0
    record_property("detail", f"{checked} instances ({tried} drawn), counterexamples={len(bad)}, {dt:.1f}s")
    assert checked >= 100 and not bad and dt < 60


@pytest.mark.criterion(11, "key lemma")
def test_key_lemma(record_property):
    mpmath.mp.dps = 40
    rng = random.Random(7)
    t0 = time.perf_counter()
    samples = [mpmath.mpf(KEY_LEMMA_MIN_A)]
    samples += [mpmath.mpf(KEY_LEMMA_MIN_A) * mpmath.power(10, rng.uniform(0, 60)) for _ in range(999)]
    bad = []
    for a in samples:
        x = 2 * a * mpmath.log(a) ** 2
        if not x / mpmath.log(x) ** 2 > a:
            bad.append(a)
    dt = time.perf_counter() - t0
    record_property("detail", f"{len(samples)} samples, failures={len(bad)}, {dt:.3f}s")
    assert not bad and dt < 1.0
