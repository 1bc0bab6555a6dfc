import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from tullock import (
    BadEpsParam,
    DomainError,
    InvalidSSLT,
    SSLTInstance,
    TooLarge,
    brute_force_pne,
    contest_pne_oracle,
    reduce_sslt_to_contest,
    sslt_bruteforce,
    subset_sum_via_sslt_oracle,
    thresholds,
)


def test_reduction_example():
    red = reduce_sslt_to_contest(SSLTInstance((2, 2), 4), R=2.0, eps_param=0.1)
    assert red.contest.r == pytest.approx((2.0, 2.0, 2.5))
    # mpmath evaluation of the sentinel coefficient
    assert red.contest.a == pytest.approx((2.0, 2.0, 3.8036288715636536), rel=1e-13)
    for i in red.element_to_player:
        assert thresholds(red.contest.players[i], 2.0).upperA == pytest.approx(4.0, abs=1e-9)
    assert thresholds(red.contest.players[red.sentinel_index], 2.0).lowerA == pytest.approx(4.0, abs=1e-9)
    assert red.sentinel_index == 2 and red.sentinel_r_exceeds_two


def test_reduction_rejects_bad_inputs():
    with pytest.raises(InvalidSSLT):
        SSLTInstance((2, 2), 3)
    with pytest.raises(InvalidSSLT):
        SSLTInstance((0, 2), 5)
    with pytest.raises(BadEpsParam):
        reduce_sslt_to_contest(SSLTInstance((2, 2), 4), eps_param=0.5)
    with pytest.raises(DomainError):
        reduce_sslt_to_contest(SSLTInstance((2, 2), 4), R=1.0)


def test_default_eps_param():
    red = reduce_sslt_to_contest(SSLTInstance((1, 3), 8))
    assert red.eps_param == pytest.approx(0.1 * 1 / 8)


@given(st.lists(st.floats(0.5, 20), min_size=1, max_size=8), st.floats(2.0, 4.0), st.floats(1.1, 5))
def test_reduction_invariants(Z, scale, R):
    sslt = SSLTInstance(tuple(Z), scale * max(Z))
    red = reduce_sslt_to_contest(sslt, R)
    zbar = sslt.target
    for i in red.element_to_player:
        p = red.contest.players[i]
        assert 1 < p.r <= 2
        assert thresholds(p, R).upperA == pytest.approx(zbar, rel=1e-9)
    s = red.contest.players[red.sentinel_index]
    assert thresholds(s, R).lowerA == pytest.approx(zbar, rel=1e-9)
    assert red.sentinel_r_exceeds_two == (s.r > 2)


def test_bruteforce_examples():
    assert sslt_bruteforce(SSLTInstance((2, 2), 4)) == (0, 1)
    assert sslt_bruteforce(SSLTInstance((2, 2), 5)) is None
    assert sslt_bruteforce(SSLTInstance((3.5, 3.5), 7)) == (0, 1)
    with pytest.raises(TooLarge):
        sslt_bruteforce(SSLTInstance(tuple([1.0] * 26), 60))


def test_recursive_driver_examples():
    calls = []

    def counting(s):
        calls.append(s)
        return sslt_bruteforce(s)

    assert subset_sum_via_sslt_oracle([3, 5, 2], 10)
    assert subset_sum_via_sslt_oracle([3, 5], 0, counting) and calls == []
    assert not subset_sum_via_sslt_oracle([4, 4], 7)
    # two elements of exactly half the target
    assert subset_sum_via_sslt_oracle([4, 3, 3], 6)
    assert not subset_sum_via_sslt_oracle([], 5)


@settings(max_examples=200)
@given(st.lists(st.integers(1, 30), max_size=12), st.integers(0, 120))
def test_recursive_driver_matches_enumeration(Z, T):
    assert subset_sum_via_sslt_oracle(Z, T) == (T in oracles.subset_sums(Z))


def test_contest_oracle_drives_the_recursion():
    assert subset_sum_via_sslt_oracle([3, 5, 2], 10, contest_pne_oracle)
    assert not subset_sum_via_sslt_oracle([4, 4], 7, contest_pne_oracle)


@settings(max_examples=30)
@given(st.integers(0, 100_000))
def test_reduction_round_trip(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 7))
    Z = rng.integers(1, 21, n).astype(float)
    T = max(2 * Z.max(), float(Z[rng.random(n) < 0.6].sum()))
    sslt = SSLTInstance(tuple(Z), T)
    red = reduce_sslt_to_contest(sslt)
    certs = brute_force_pne(red.contest)
    assert bool(certs) == (T in oracles.subset_sums(list(Z)))
    for c in certs:
        assert red.sentinel_index not in c.active
        assert c.aggregate == pytest.approx(T, abs=1e-6)
        assert sum(Z[list(red.subset_of(c.active))]) == T
