import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from tullock import (
    ContestInstance,
    DomainError,
    MaxIterationsExceeded,
    MirrorDescentConfig,
    Status,
    brute_force_pne,
    check_pne,
    solve_mirror_descent,
    solve_mixed_regime,
    solve_small_elasticity,
)


def test_symmetric_lottery_closed_form():
    c = solve_small_elasticity(ContestInstance.from_lists(4, [1, 1], [1, 1]))
    assert c.aggregate == pytest.approx(2.0, abs=1e-10)
    assert c.shares == pytest.approx((0.5, 0.5), abs=1e-10)
    assert c.efforts == pytest.approx((1.0, 1.0), abs=1e-10)
    c = solve_small_elasticity(ContestInstance.from_lists(3, [1, 1, 1], [1, 1, 1]))
    assert c.aggregate == pytest.approx(2.0, abs=1e-10)
    assert c.efforts == pytest.approx((2 / 3,) * 3, abs=1e-10)


def test_small_elasticity_matches_reference_aggregate():
    inst = ContestInstance.from_lists(2, [1, 1], [1, 0.5])
    c = solve_small_elasticity(inst)
    assert c.share_sum == pytest.approx(1.0, abs=1e-10)
    assert c.aggregate == pytest.approx(float(oracles.aggregate([(1, 1), (1, 0.5)], 2)), abs=1e-9)
    # mpmath bisection on the share sum
    inst = ContestInstance.from_lists(3, [1, 2, 0.7], [0.5, 0.8, 1])
    assert solve_small_elasticity(inst).aggregate == pytest.approx(1.9425406618431596, rel=1e-10)


def test_small_elasticity_rejects_convex_players():
    with pytest.raises(DomainError):
        solve_small_elasticity(ContestInstance.from_lists(2, [1, 1], [1, 2]))


@given(st.integers(2, 6), st.floats(1.1, 6), st.data())
def test_small_elasticity_certificate_passes(n, R, data):
    a = data.draw(st.lists(st.floats(0.3, 3), min_size=n, max_size=n))
    r = data.draw(st.lists(st.floats(0.2, 1.0), min_size=n, max_size=n))
    inst = ContestInstance.from_lists(R, a, r)
    c = solve_small_elasticity(inst)
    assert check_pne(inst, c).passed


def test_mirror_descent_lottery():
    inst = ContestInstance.from_lists(4, [1, 1], [1, 1])
    res = solve_mirror_descent(inst, x0=[0.1, 0.1])
    assert res.profile.x == pytest.approx((1.0, 1.0), abs=1e-6)
    res = solve_mirror_descent(inst, x0=[1.0, 1.0])
    assert res.iterations == 0


def test_mirror_descent_matches_bisection_on_random_instance():
    rng = np.random.default_rng(11)
    inst = ContestInstance.from_lists(rng.uniform(1.5, 5), rng.uniform(0.5, 2, 5), rng.uniform(0.3, 1, 5))
    res = solve_mirror_descent(inst)
    A = sum(p.a * x**p.r for p, x in zip(inst.players, res.profile.x))
    assert A == pytest.approx(solve_small_elasticity(inst).aggregate, abs=1e-5)


def test_mirror_descent_budget_and_config():
    inst = ContestInstance.from_lists(4, [1, 1], [1, 1])
    with pytest.raises(MaxIterationsExceeded) as err:
        solve_mirror_descent(inst, MirrorDescentConfig(max_iterations=3), x0=[0.1, 0.1])
    assert err.value.profile is not None and err.value.residual > 0
    with pytest.raises(DomainError):
        MirrorDescentConfig(step_size=0)
    with pytest.raises(DomainError):
        solve_mirror_descent(ContestInstance.from_lists(2, [1, 1], [1, 3]))


def test_mixed_regime_examples():
    out = solve_mixed_regime(ContestInstance.from_lists(2, [0.375, 1], [3, 1]))
    assert out.status is Status.FOUND and len(out.certificates) == 1
    c = out.certificates[0]
    assert c.aggregate == pytest.approx(4 / 3, rel=1e-9)
    assert c.shares == pytest.approx((2 / 3, 1 / 3), rel=1e-9)
    assert solve_mixed_regime(ContestInstance.from_lists(2, [1, 1], [3, 3])).status is Status.NO_PNE
    assert solve_mixed_regime(ContestInstance.from_lists(2, [1, 1], [1, 1.5])).status is Status.NOT_APPLICABLE


def test_mixed_regime_equilibrium_below_the_large_players_lower_threshold():
    # the lone large player is active although A* is far below its lowerA
    out = solve_mixed_regime(ContestInstance.from_lists(2, [100, 1], [3, 1]))
    assert out.status is Status.FOUND
    (c,) = out.certificates
    assert c.active == (0, 1)
    assert c.aggregate == pytest.approx(1.9080893494843309, rel=1e-10)


def test_mixed_regime_multiple_equilibria():
    # two equilibria, one per large player, from mpmath enumeration of active sets
    inst = ContestInstance.from_lists(2, [1, 1, 0.6], [0.5, 3, 3])
    out = solve_mixed_regime(inst)
    assert [c.active for c in out.certificates] == [(0, 2), (0, 1)]
    assert [c.aggregate for c in out.certificates] == pytest.approx([1.5716260512773903, 1.7674191569103794], rel=1e-10)


@given(st.integers(0, 10_000))
def test_mixed_regime_agrees_with_brute_force(seed):
    rng = np.random.default_rng(seed)
    n1, n2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    r = list(rng.uniform(0.3, 1, n1)) + list(rng.uniform(2.05, 4, n2))
    inst = ContestInstance.from_lists(rng.uniform(1.2, 5), rng.uniform(0.3, 3, n1 + n2), r)
    got = solve_mixed_regime(inst)
    ref = brute_force_pne(inst)
    assert (got.status is Status.FOUND) == bool(ref)
    assert [c.active for c in got.certificates] == [c.active for c in ref]
    assert [c.aggregate for c in got.certificates] == pytest.approx([c.aggregate for c in ref], abs=1e-6)
