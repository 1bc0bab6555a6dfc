"""Equilibrium certification, regret measurement and the brute-force oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from ._aggregate import certificate_at, find_aggregate
from .best_response import (
    BOUNDARY_RTOL,
    b1,
    b2,
    branch_share,
    max_share_slope,
    thresholds,
    _default_interval,
    _slope,
)
from .certificates import EpsSolution, EquilibriumCertificate, induced_efforts
from .contest import ContestInstance, classify_regime, production
from .errors import AllZeroOpponents, TooLarge


@dataclass(frozen=True)
class Violation:
    condition: int
    player: int | None
    magnitude: float
    detail: str = ""


@dataclass(frozen=True)
class VerificationReport:
    passed: bool
    violations: tuple[Violation, ...] = field(default=())
    tolerance: float = 0.0

    def conditions(self) -> set[int]:
        return {v.condition for v in self.violations}


@dataclass(frozen=True)
class LipschitzEstimates:
    L_sigma: float
    L_u: float
    L: float


class EpsNEBound(NamedTuple):
    measured: float
    bound: float


def _check_triplet(instance: ContestInstance, A: float, active, shares, tol: float) -> list[Violation]:
    R = instance.R
    slack = tol * max(1.0, A)
    on = dict(zip(active, shares))
    out: list[Violation] = []

    # 1: individual rationality of (in)activity at A
    for i, p in enumerate(instance.players):
        is_active = i in on
        if p.r < 1:
            if not is_active:
                out.append(Violation(1, i, 1.0, "r < 1 players are always active"))
        elif p.r == 1:
            cut = p.a * R
            if is_active and A - cut > slack:
                out.append(Violation(1, i, A - cut, "active with a*R <= A"))
            if not is_active and cut - A > slack:
                out.append(Violation(1, i, cut - A, "inactive with a*R > A"))
        else:
            t = thresholds(p, R)
            if is_active and A - t.upperA > slack:
                out.append(Violation(1, i, A - t.upperA, "active above upperA"))
            if not is_active and t.lowerA - A > slack:
                out.append(Violation(1, i, t.lowerA - A, "inactive below lowerA"))

    # 2: each active share solves its first-order condition (scaled residual)
    for i, s in on.items():
        p = instance.players[i]
        if not 0.0 < s < 1.0:
            out.append(Violation(2, i, abs(s), "share outside (0, 1)"))
            continue
        if p.r <= 1:
            res = abs(b1(p, R, A, s)) / R
        else:
            res = abs(b2(p, R, A, s)) / A
            floor = (p.r - 1.0) / p.r
            if s < floor - tol:
                out.append(Violation(2, i, floor - s, "share below (r-1)/r"))
        if res > tol:
            out.append(Violation(2, i, res, "best-response residual"))
    return out


def check_pne(instance: ContestInstance, cert: EquilibriumCertificate, tol: float = 1e-9) -> VerificationReport:
    """Check the three equilibrium conditions on an (A, active set, shares) triplet."""
    out = _check_triplet(instance, cert.aggregate, cert.active, cert.shares, tol)
    gap = abs(math.fsum(cert.shares) - 1.0)
    if gap > tol:
        out.append(Violation(3, None, gap, "shares do not sum to one"))
    return VerificationReport(not out, tuple(out), tol)


def check_eps_solution(instance: ContestInstance, sol: EpsSolution, tol: float = 1e-9) -> VerificationReport:
    """Like :func:`check_pne` but the share sum only has to lie in ``(1-ε, 1+ε)``."""
    out = _check_triplet(instance, sol.aggregate, sol.active, sol.shares, tol)
    total = math.fsum(sol.shares)
    eps = sol.epsilon
    if not (1.0 - eps < total < 1.0 + eps):
        out.append(Violation(3, None, abs(total - 1.0) - eps, "share sum outside the open band"))
    return VerificationReport(not out, tuple(out), tol)


def _best_deviation(a: float, r: float, R: float, others: float) -> float:
    # maximise y R / (y + others) - (y / a)^(1/r) over y in [0, a R^r];
    # beyond the upper end the cost alone exceeds R
    ymax = a * R**r

    def payoff(y):
        return y / (y + others) * R - (y / a) ** (1.0 / r)

    grid = np.unique(np.concatenate([
        np.geomspace(ymax * 1e-14, ymax, 600),
        np.linspace(0.0, ymax, 600),
        np.geomspace(max(others * 1e-6, ymax * 1e-14), ymax, 200),
    ]))
    vals = grid / (grid + others) * R - (grid / a) ** (1.0 / r)
    k = int(np.argmax(vals))
    best = max(0.0, float(vals[k]))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    if hi > lo:
        res = minimize_scalar(lambda y: -payoff(y), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-14 * max(hi, 1e-300)})
        best = max(best, -float(res.fun))
    return best


def regret(instance: ContestInstance, profile, i: int) -> float:
    """Largest gain player ``i`` can get by a unilateral effort change."""
    x = tuple(getattr(profile, "x", profile))
    ys = [production(p, xi) for p, xi in zip(instance.players, x)]
    others = math.fsum(ys[:i] + ys[i + 1:])
    if others == 0.0:
        raise AllZeroOpponents(f"opponents of player {i} produce nothing")
    p = instance.players[i]
    current = ys[i] / (ys[i] + others) * instance.R - x[i]
    return max(0.0, _best_deviation(p.a, p.r, instance.R, others) - current)


def _branch_utility_slope(a: float, r: float, R: float, A: float, s: float, ds: float) -> float:
    if s == 0.0:
        return 0.0
    inner = s * A / a
    return R * ds - (1.0 / r) * inner ** (1.0 / r - 1.0) * (ds * A + s) / a


def lipschitz_estimates(instance: ContestInstance, samples: int = 1000, safety: float = 2.0,
                        interval=None) -> LipschitzEstimates:
    """Sampled Lipschitz constants of shares and best-response utilities in the aggregate."""
    lo, hi = interval if interval is not None else _default_interval(instance)
    R = instance.R
    L_sigma = max(safety * max_share_slope(instance, (lo, hi), samples), 1e-12)
    worst_u = 0.0
    for p in instance.players:
        top = min(hi, thresholds(p, R).upperA) if p.r > 1 else hi
        if top < lo:
            continue
        for A in np.linspace(lo, top, samples):
            A = float(A)
            s = branch_share(p, R, A)
            worst_u = max(worst_u, abs(_branch_utility_slope(p.a, p.r, R, A, s, _slope(p, R, A))))
    L_u = max(safety * worst_u, 1e-12)
    return LipschitzEstimates(L_sigma, L_u, L_u / (L_sigma * instance.n))


def eps_ne_bound(instance: ContestInstance, sol, lipschitz: LipschitzEstimates | None = None) -> EpsNEBound:
    """Measured worst regret at the profile an ε-solution induces, next to ``L * ε``."""
    x = induced_efforts(instance, sol.aggregate, sol.active, sol.shares)
    measured = max(regret(instance, x, i) for i in range(instance.n))
    if lipschitz is None:
        lipschitz = lipschitz_estimates(instance)
    eps = getattr(sol, "epsilon", 0.0)
    return EpsNEBound(measured, lipschitz.L * eps)


def brute_force_pne(instance: ContestInstance, tol: float = 1e-10, max_convex: int = 12) -> list[EquilibriumCertificate]:
    """Every pure equilibrium, found by enumerating convex active sets.

    For each subset of the ``r > 1`` players the share sum is monotone on the
    aggregate interval where that subset can be the active one, so a single
    bisection locates the only candidate.  Concave players follow k1.
    """
    rc = classify_regime(instance)
    if rc.n2 > max_convex:
        raise TooLarge(f"{rc.n2} convex players exceeds the guard of {max_convex}")
    R = instance.R
    ts = {j: thresholds(instance.players[j], R) for j in rc.I2}
    found: list[EquilibriumCertificate] = []
    for mask in range(1 << rc.n2):
        S = tuple(j for k, j in enumerate(rc.I2) if mask >> k & 1)
        if not S and not rc.I1:
            continue
        lo = max((ts[j].lowerA for j in rc.I2 if j not in S), default=0.0)
        hi = min((ts[j].upperA for j in S), default=math.inf)
        if lo > hi * (1.0 + BOUNDARY_RTOL):
            continue
        lo = min(lo, hi)
        A = find_aggregate(instance, S, lo, hi, tol)
        if A is None:
            continue
        cert = certificate_at(instance, A, S)
        if check_pne(instance, cert, tol).passed:
            found.append(cert)
    found.sort(key=lambda c: c.aggregate)
    return found
