import pytest
from hypothesis import given, strategies as st

from kbpow.kbonacci import generate
from kbpow.search import (Solution, derived_identity_holds, digest, family_member, family_members,
                          in_mixed_block, mixed_case_condition, printed_identity_holds, search_k,
                          search_k_naive, search_range, verify_theorem1, verify_theorem2_cases)


def test_k5_examples():
    sols = search_k(5, 20)
    assert Solution(5, 7, 2, 5) in sols
    assert Solution(5, 9, 5, 7) in sols


def test_k3_all_n_equals_t_plus_2():
    sols = search_k(3, 20)
    assert sols
    assert all(s.n_is_t_plus_2 for s in sols)


@pytest.mark.parametrize("k", range(2, 9))
def test_windowed_matches_naive(k):
    assert search_k(k, 120) == search_k_naive(k, 120)


def test_fibonacci_counterexample_is_reported():
    rep = search_range(2, 2, 50)
    assert Solution(2, 7, 4, 4) in rep.violations
    assert [s.as_tuple() for s in rep.solutions] == [(4, 2, 2, 2), (5, 4, 3, 2), (7, 4, 4, 2)]


def test_desk_scale_has_no_violations():
    rep = verify_theorem1(3, 30, 600)
    assert rep.violations == []
    assert rep.condition_failures == []
    assert rep.pairs_scanned == 28 * 598


def test_solutions_check_exactly():
    rep = search_range(3, 12, 200)
    tables = {k: generate(k, 200) for k in range(3, 13)}
    assert all(s.check(tables[s.k]) for s in rep.solutions)
    assert not Solution(5, 7, 3, 5).check()
    assert not Solution(5, 2, 7, 5).check()


def test_digest_separates_powers_of_two():
    ds = {digest(1 << e) for e in range(0, 3000)}
    assert len(ds) == 3000


@given(st.integers(1, 1 << 400))
def test_digest_is_deterministic(x):
    assert digest(x) == digest(int(str(x)))
    assert digest(x)[0] == x.bit_length()


@pytest.mark.parametrize("k", [3, 4, 5, 6, 7, 100])
def test_theorem2_cases(k):
    rep = verify_theorem2_cases(k)
    assert rep.ok, rep


def test_identities():
    # neither identity has solutions in the high block for small k
    for k in range(3, 40):
        for n in range(k + 3, 2 * k + 3):
            for m in range(k + 2, n):
                assert not printed_identity_holds(n, m, k)
                assert not derived_identity_holds(n, m, k)
    # the two readings differ in the sign of (m - k): at k=2, 8 = 3*2 + 2
    assert derived_identity_holds(5, 4, 2)
    assert not printed_identity_holds(5, 4, 2)


def test_family_examples():
    assert family_member(1, 5) == Solution(5, 7, 2, 5)
    assert family_member(2, 5) == Solution(5, 9, 5, 7)
    assert family_member(3, 8) is None
    assert family_member(3, 9) == Solution(9, 17, 10, 15)
    with pytest.raises(ValueError):
        family_member(0, 5)


def test_family_all_verify():
    fam = family_members(4, 200, 2)
    assert all(s.check() and s.n_is_t_plus_2 for s in fam)
    assert all(mixed_case_condition(s.n, s.m, s.t, s.k) for s in fam)
    assert all(in_mixed_block(s) for s in fam)


def test_mixed_case_condition():
    assert mixed_case_condition(7, 2, 5, 5)
    assert not mixed_case_condition(10, 3, 8, 4)


def test_bad_ranges():
    with pytest.raises(ValueError):
        search_range(3, 2, 10)
    with pytest.raises(ValueError):
        search_k(3, 2)
