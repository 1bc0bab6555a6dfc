import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tullock import (
    ContestInstance,
    NoConvexPlayers,
    ShareItem,
    approx_subset_sum,
    brute_force_pne,
    build_candidate_nodes,
    check_eps_solution,
    choose_delta,
    search_eps_ne,
    search_eps_ne_report,
    solve_small_elasticity,
    trim_from_above,
    trim_from_below,
    verify_node,
)
from tullock.best_response import k1_share, k2_share, rho_bound, thresholds
from tullock.hardness import SSLTInstance, reduce_sslt_to_contest


def items(values):
    return [ShareItem(k, v) for k, v in enumerate(values)]


def test_choose_delta_policy():
    four = ContestInstance.from_lists(2, [1] * 4, [1.5] * 4)
    assert choose_delta(four, 0.08, rho=2.0) == pytest.approx(0.005)
    two = ContestInstance.from_lists(2, [1, 2], [1.5, 0.5])
    d = choose_delta(two, 0.01)
    assert d * rho_bound(two) * two.n < 0.01


def test_candidate_node_examples():
    one = ContestInstance.from_lists(2, [1, 1], [2, 0.5])
    assert build_candidate_nodes(one, 0.5).nodes == pytest.approx((1.0, 1.5, 2.0))
    two = ContestInstance.from_lists(2, [1, 0.375], [2, 3])
    t2 = thresholds(two.players[1], 2)
    nodes = build_candidate_nodes(two, 10.0).nodes
    assert nodes == pytest.approx(sorted((4 / 9, 1.0, 4 / 3, 2.0)))
    assert t2.lowerA in nodes
    with pytest.raises(NoConvexPlayers):
        build_candidate_nodes(ContestInstance.from_lists(2, [1, 1], [1, 1]), 0.1)


def test_node_count_scales_with_delta():
    inst = ContestInstance.from_lists(2, [1, 0.375], [2, 3])
    n1 = len(build_candidate_nodes(inst, 0.01).nodes)
    n2 = len(build_candidate_nodes(inst, 0.005).nodes)
    assert n2 <= 2 * n1 + 4


def test_trim_examples():
    assert trim_from_below([1.0, 1.04, 1.05, 1.2], 0.05) == [1.0, 1.2]
    assert trim_from_below([1.0], 0.3) == [1.0]
    assert trim_from_below([1, 2, 4, 8], 0.5) == [1, 2, 4, 8]
    assert trim_from_above([1.2, 1.15, 1.0], 0.05) == [1.2, 1.0]
    assert trim_from_above([2.0], 0.3) == [2.0]
    # 4 is not strictly below 8 * 0.5, 2 is below 4, 1 is not below 1
    assert trim_from_above([8, 4, 2, 1], 0.5) == [8, 2]


@given(st.lists(st.floats(0.01, 10), min_size=1, max_size=40), st.floats(0.001, 0.5))
def test_trimming_soundness(values, d):
    up = sorted(values)
    kept = trim_from_below(up, d)
    assert all(v in values for v in kept)
    for v in up:
        assert any(k <= v <= k * (1 + d) for k in kept)
    down = sorted(values, reverse=True)
    kept = trim_from_above(down, d)
    for v in down:
        assert any(k * (1 - d) <= v <= k for k in kept)


def test_subset_sum_examples():
    assert approx_subset_sum(1.0, [], 0.1) == ()
    got = approx_subset_sum(0.4, items([0.3, 0.3, 0.5]), 0.05)
    assert sorted(i.player_index for i in got) == [0, 1]
    assert approx_subset_sum(0.0, items([0.3, 0.3]), 0.05) is None


@given(st.floats(0.0, 0.6), st.lists(st.floats(0.0, 1.0), max_size=12), st.floats(0.005, 0.2))
def test_subset_sum_sound_and_complete(base, values, eps):
    its = items(values)
    got = approx_subset_sum(base, its, eps)
    totals = [math.fsum([base] + list(c)) for k in range(len(values) + 1) for c in itertools.combinations(values, k)]
    if got is not None:
        total = math.fsum([base] + [i.share_value for i in got])
        assert 1 - eps < total < 1 + eps
    if any(1 - eps / 2 <= t <= 1 + eps / 2 for t in totals):
        assert got is not None


def test_verify_node_on_reduction_instance():
    red = reduce_sslt_to_contest(SSLTInstance((2, 2), 4))
    sol = verify_node(red.contest, 4.0, 0.01)
    assert sol.active == (0, 1)
    assert sol.shares == pytest.approx((0.5, 0.5), abs=1e-12)
    assert verify_node(red.contest, 3.5, 0.01) is None


def test_verify_node_with_nothing_active():
    # both players are convex and far above their upper thresholds
    inst = ContestInstance.from_lists(2, [1, 1], [1.5, 1.5])
    assert verify_node(inst, 50.0, 0.01) is None


def test_search_on_all_small_instance_returns_the_exact_equilibrium():
    inst = ContestInstance.from_lists(3, [1, 2, 0.7], [0.5, 0.8, 1])
    (sol,) = search_eps_ne(inst, 1e-3)
    cert = solve_small_elasticity(inst)
    assert sol.aggregate == pytest.approx(cert.aggregate, rel=1e-12)
    assert sol.shares == pytest.approx(cert.shares, rel=1e-9)


def test_search_on_reduction_instances():
    yes = reduce_sslt_to_contest(SSLTInstance((2, 2), 4))
    sols = search_eps_ne(yes.contest, 1e-3)
    assert any(abs(s.aggregate - 4) < 1e-6 for s in sols)
    no = reduce_sslt_to_contest(SSLTInstance((2, 2), 5))
    rep = search_eps_ne_report(no.contest, 1e-3)
    assert brute_force_pne(no.contest) == []
    assert rep.exact == ()
    assert all(abs(s.share_sum - 1) > 1e-9 for s in rep.solutions)


def _random_medium(seed, n_max=6):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, n_max + 1))
    u = rng.random(n)
    r = np.where(u < 0.5, rng.uniform(1.01, 2, n), np.where(u < 0.75, rng.uniform(0.3, 1, n), rng.uniform(2.01, 4, n)))
    r[0] = rng.uniform(1.01, 2)
    return ContestInstance.from_lists(rng.uniform(1.5, 5), rng.uniform(0.5, 2, n), r)


@settings(max_examples=15)
@given(st.integers(0, 100_000))
def test_search_outputs_pass_their_own_check(seed):
    inst = _random_medium(seed)
    for sol in search_eps_ne(inst, 1e-2):
        assert check_eps_solution(inst, sol).passed


@settings(max_examples=15)
@given(st.integers(0, 100_000))
def test_search_finds_something_whenever_an_exact_equilibrium_exists(seed):
    inst = _random_medium(seed)
    if brute_force_pne(inst):
        assert search_eps_ne(inst, 1e-2)


@pytest.mark.parametrize("seed", [3, 8, 21])
def test_prefilter_does_not_change_the_output(seed):
    inst = _random_medium(seed, n_max=4)
    fast = search_eps_ne_report(inst, 0.02)
    slow = search_eps_ne_report(inst, 0.02, prefilter=False)
    assert fast.solutions == slow.solutions
    assert fast.nodes_total == slow.nodes_total
    assert fast.nodes_verified <= slow.nodes_verified == slow.nodes_total


@settings(max_examples=20)
@given(st.integers(0, 100_000), st.floats(0.001, 0.05))
def test_adjacent_nodes_keep_share_sums_within_eps(seed, eps):
    inst = _random_medium(seed)
    delta = choose_delta(inst, eps)
    rng = np.random.default_rng(seed)
    lo = min(thresholds(inst.players[j], inst.R).lowerA for j in range(inst.n) if inst.players[j].r > 1)
    hi = max(thresholds(inst.players[j], inst.R).upperA for j in range(inst.n) if inst.players[j].r > 1)
    for _ in range(20):
        A1 = rng.uniform(lo, max(lo, hi - delta))
        A2 = A1 + delta

        def total(A):
            s = 0.0
            for p in inst.players:
                if p.r <= 1:
                    s += k1_share(p, inst.R, A)
                elif A2 <= thresholds(p, inst.R).upperA:
                    s += k2_share(p, inst.R, A)
            return s

        assert abs(total(A1) - total(A2)) < eps
