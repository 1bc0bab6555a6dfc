"""Subset Sum with Large Targets (SSLT), its reduction to Tullock contests, and
the recursive driver that answers plain subset sum with an SSLT oracle.

An SSLT instance asks for a subset of positive numbers ``Z`` summing to a
target ``zbar >= 2 max Z``.  Each element ``z_i`` becomes a medium-elasticity
player whose upper threshold equals ``zbar`` and whose share there is
``z_i / zbar``; a sentinel player whose lower threshold is ``zbar`` keeps every
other aggregate from supporting an equilibrium.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .contest import ContestInstance, Player
from .errors import BadEpsParam, DomainError, InvalidSSLT, TooLarge
from .verify import brute_force_pne

SUM_ATOL = 1e-9
MAX_BRUTEFORCE = 25


@dataclass(frozen=True)
class SSLTInstance:
    elements: tuple[float, ...]
    target: float

    def __post_init__(self):
        els = tuple(float(z) for z in self.elements)
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "target", float(self.target))
        if not els:
            raise InvalidSSLT("elements must be non-empty")
        if not all(math.isfinite(z) and z > 0 for z in els):
            raise InvalidSSLT("elements must be positive and finite")
        if not (math.isfinite(self.target) and self.target > 0):
            raise InvalidSSLT("target must be positive and finite")
        if self.target < 2.0 * max(els):
            raise InvalidSSLT(f"target {self.target} is below twice the largest element {max(els)}")

    @property
    def z_min(self) -> float:
        return min(self.elements)


@dataclass(frozen=True)
class ReductionResult:
    contest: ContestInstance
    element_to_player: tuple[int, ...]
    sentinel_index: int
    eps_param: float
    sentinel_r_exceeds_two: bool

    def subset_of(self, active) -> tuple[int, ...]:
        """Element indices whose players appear in ``active``."""
        back = {p: k for k, p in enumerate(self.element_to_player)}
        return tuple(sorted(back[i] for i in active if i in back))


def reduce_sslt_to_contest(sslt: SSLTInstance, R: float = 2.0, eps_param: float | None = None) -> ReductionResult:
    """Contest whose pure equilibria correspond to solutions of ``sslt``.

    Element ``i`` gets ``r_i = 1/(1 - z_i/zbar)`` and ``a_i`` chosen so that its
    upper threshold is ``zbar``.  The sentinel gets ``r = 1/(z'/zbar - eps)``
    (``z'`` the smallest element) and ``a`` chosen so its lower threshold is
    ``zbar``.  ``eps_param`` defaults to ``0.1 z'/zbar``.
    """
    if not (math.isfinite(R) and R > 1):
        raise DomainError("R must exceed 1")
    zbar = sslt.target
    ratio = sslt.z_min / zbar
    if eps_param is None:
        eps_param = 0.1 * ratio
    if not (eps_param > 0 and eps_param < ratio):
        raise BadEpsParam(f"eps_param must lie in (0, {ratio}), got {eps_param}")
    players = []
    for z in sslt.elements:
        r = 1.0 / (1.0 - z / zbar)
        log_a = math.log(zbar) - r * math.log(R) - (r - 1.0) * math.log((r - 1.0) / r)
        players.append(Player(math.exp(log_a), r))
    r = 1.0 / (ratio - eps_param)
    log_a = math.log(zbar) - r * math.log(R) - (r - 1.0) * math.log(r - 1.0) + r * math.log(r)
    players.append(Player(math.exp(log_a), r))
    n = len(sslt.elements)
    return ReductionResult(
        ContestInstance(R, tuple(players)), tuple(range(n)), n, eps_param, r > 2.0
    )


def _all_sums(values: Sequence[float]) -> np.ndarray:
    # entry k is the sum over the elements selected by the bits of k
    sums = np.zeros(1)
    for z in values:
        sums = np.concatenate([sums, sums + z])
    return sums


def sslt_bruteforce(sslt: SSLTInstance, atol: float = SUM_ATOL) -> Optional[tuple[int, ...]]:
    """A subset of element indices summing to the target, by full enumeration."""
    n = len(sslt.elements)
    if n > MAX_BRUTEFORCE:
        raise TooLarge(f"{n} elements exceeds the enumeration guard of {MAX_BRUTEFORCE}")
    hits = np.flatnonzero(np.abs(_all_sums(sslt.elements) - sslt.target) <= atol)
    if hits.size == 0:
        return None
    k = int(hits[0])
    return tuple(i for i in range(n) if k >> i & 1)


def contest_pne_oracle(sslt: SSLTInstance, R: float = 2.0, tol: float = 1e-10) -> Optional[tuple[int, ...]]:
    """SSLT decision through the reduced contest: a solving subset iff a pure equilibrium exists."""
    red = reduce_sslt_to_contest(sslt, R)
    certs = brute_force_pne(red.contest, tol=tol, max_convex=MAX_BRUTEFORCE + 1)
    if not certs:
        return None
    return red.subset_of(certs[0].active)


SSLTOracle = Callable[[SSLTInstance], Optional[Sequence[int]]]


def subset_sum_via_sslt_oracle(Z: Sequence[float], T: float, oracle: SSLTOracle | None = None,
                               atol: float = SUM_ATOL) -> bool:
    """Plain subset sum answered by recursion down to SSLT-shaped subproblems.

    Once the target is at least twice the largest element the oracle decides.
    Otherwise at most one element above ``T/2`` can be used, so the driver
    branches over that choice (or none) and recurses on the small elements.
    """
    oracle = oracle or sslt_bruteforce

    def solve(zs: tuple[float, ...], t: float) -> bool:
        if abs(t) <= atol:
            return True
        if t < 0 or not zs:
            return False
        if t >= 2.0 * max(zs):
            return oracle(SSLTInstance(zs, t)) is not None
        small = tuple(z for z in zs if z <= t / 2.0)
        large = [z for z in zs if z > t / 2.0]
        if solve(small, t):
            return True
        return any(solve(small, t - z) for z in large)

    return solve(tuple(float(z) for z in Z), float(T))


def pad_instance(instance: ContestInstance, extra: Sequence[tuple[float, float]]) -> ContestInstance:
    """Append players ``(a, r)``; with tiny ``a`` they leave the equilibria essentially unchanged."""
    return ContestInstance(instance.R, instance.players + tuple(Player(a, r) for a, r in extra))
