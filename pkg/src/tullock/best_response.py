"""Best-response action shares as functions of the aggregate action.

For a player with ``r <= 1`` the share ``k1(A)`` solves
``(1 - s) R - g'(s A) A = 0`` where ``g`` is the cost of production.  For
``r > 1`` the share ``k2(A)`` solves ``a R^r r^r (1 - s)^r s^(r-1) = A`` on the
positive-utility branch ``s >= (r - 1) / r``.  Convex players additionally
have participation thresholds ``lowerA < upperA`` bounding the band in which
abstaining is also a best response.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._roots import newton_decreasing
from .contest import ContestInstance, Player, classify_regime
from .errors import AboveUpperThreshold, AtDiscontinuity, NotConvexPlayer

# Relative slack used when comparing an aggregate against a threshold, so that
# values computed to be "equal" up to rounding land on the closed side.
BOUNDARY_RTOL = 1e-9


@dataclass(frozen=True)
class PlayerThresholds:
    lowerA: float
    upperA: float


class BRKind(str, enum.Enum):
    ZERO = "zero"
    SHARE = "share"
    ZERO_OR_SHARE = "zero_or_share"


@dataclass(frozen=True)
class BestResponse:
    kind: BRKind
    share: float = 0.0

    @property
    def may_participate(self) -> bool:
        return self.kind is not BRKind.ZERO


def _log_lower(player: Player, R: float) -> float:
    r = player.r
    return math.log(player.a) + r * math.log(R) + (r - 1) * math.log(r - 1) - r * math.log(r)


def thresholds(player: Player, R: float) -> PlayerThresholds:
    """Participation thresholds of a convex (``r > 1``) player."""
    if player.r <= 1:
        raise NotConvexPlayer(f"thresholds need r > 1, got r={player.r}")
    lower = math.exp(_log_lower(player, R))
    return PlayerThresholds(lower, player.r * lower)


def b1(player: Player, R: float, A: float, share: float) -> float:
    """First-order residual for a concave player (``r <= 1``)."""
    r, a = player.r, player.a
    marginal = (A / (r * a)) * (share * A / a) ** (1.0 / r - 1.0)
    return (1.0 - share) * R - marginal


def b2(player: Player, R: float, A: float, share: float) -> float:
    """First-order residual for a convex player (``r > 1``)."""
    r, a = player.r, player.a
    return a * R**r * r**r * (1.0 - share) ** r * share ** (r - 1.0) - A


def k1_share(player: Player, R: float, A: float) -> float:
    """Best-response share of a player with ``r <= 1`` at aggregate ``A``."""
    r, a = player.r, player.a
    if r == 1.0:
        return 0.0 if A >= R * a else 1.0 - A / (R * a)
    beta = 1.0 / r - 1.0
    log_c = -math.log(r) + (math.log(A) - math.log(a)) / r
    log_R = math.log(R)

    def g(s):
        return math.log1p(-s) + log_R - log_c - beta * math.log(s)

    def dg(s):
        return -1.0 / (1.0 - s) - beta / s

    # small-share asymptote c s^beta = R as the starting point; below the
    # normal double range the share is reported as zero
    log_guess = (log_R - log_c) / beta
    if log_guess < -700.0:
        return 0.0
    log_guess = min(log_guess, math.log(0.5))
    return newton_decreasing(g, dg, 0.0, 1.0, math.exp(log_guess))


def k2_share(player: Player, R: float, A: float) -> float:
    """Positive-utility best-response share of a player with ``r > 1``.

    Defined for ``0 < A <= upperA``; returns ``(r - 1) / r`` at the threshold.
    """
    r, a = player.r, player.a
    t = thresholds(player, R)
    floor = (r - 1.0) / r
    if A >= t.upperA:
        if A <= t.upperA * (1.0 + BOUNDARY_RTOL):
            return floor
        raise AboveUpperThreshold(f"A={A} exceeds upper threshold {t.upperA}")
    log_C = math.log(a) + r * math.log(R) + r * math.log(r)
    log_A = math.log(A)

    def F(s):
        return log_C + r * math.log1p(-s) + (r - 1.0) * math.log(s) - log_A

    def dF(s):
        return -r / (1.0 - s) + (r - 1.0) / s

    guess = max(floor, -math.expm1((log_A - log_C) / r))
    return newton_decreasing(F, dF, floor, 1.0, guess)


def best_response_share(player: Player, R: float, A: float) -> BestResponse:
    """Admissible best-response shares at aggregate ``A``."""
    if player.r <= 1:
        s = k1_share(player, R, A)
        return BestResponse(BRKind.SHARE, s) if s > 0 else BestResponse(BRKind.ZERO)
    t = thresholds(player, R)
    if A > t.upperA * (1.0 + BOUNDARY_RTOL):
        return BestResponse(BRKind.ZERO)
    s = k2_share(player, R, A)
    if A >= t.lowerA * (1.0 - BOUNDARY_RTOL):
        return BestResponse(BRKind.ZERO_OR_SHARE, s)
    return BestResponse(BRKind.SHARE, s)


def branch_share(player: Player, R: float, A: float) -> float:
    """Share along the participating branch: k1, or k2 up to upperA and 0 beyond."""
    if player.r <= 1:
        return k1_share(player, R, A)
    if A > thresholds(player, R).upperA * (1.0 + BOUNDARY_RTOL):
        return 0.0
    return k2_share(player, R, A)


def _slope(player: Player, R: float, A: float) -> float:
    # derivative along the participating branch, one-sided (from below) at upperA
    r, a = player.r, player.a
    if r <= 1:
        s = k1_share(player, R, A)
        if s == 0.0:
            return 0.0
        beta = 1.0 / r - 1.0
        c = a ** (-1.0 / r) * A ** (1.0 / r) / r
        d_share = -R - c * beta * s ** (beta - 1.0) if beta else -R
        d_agg = -c * s**beta / (r * A)
        return -d_agg / d_share
    if A > thresholds(player, R).upperA * (1.0 + BOUNDARY_RTOL):
        return 0.0
    s = k2_share(player, R, A)
    return 1.0 / (A * (-r / (1.0 - s) + (r - 1.0) / s))


def share_derivative(player: Player, R: float, A: float) -> float:
    """``d share / d A`` by implicit differentiation of the first-order condition."""
    if player.r > 1:
        upper = thresholds(player, R).upperA
        if abs(A - upper) <= BOUNDARY_RTOL * upper:
            raise AtDiscontinuity(f"share jumps to zero at A={upper}")
    return _slope(player, R, A)


def aggregate_range(instance: ContestInstance) -> tuple[float, float]:
    """``(min lowerA, max upperA)`` over convex players."""
    I2 = classify_regime(instance).I2
    if not I2:
        raise NotConvexPlayer("instance has no player with r > 1")
    ts = [thresholds(instance.players[i], instance.R) for i in I2]
    return min(t.lowerA for t in ts), max(t.upperA for t in ts)


def _default_interval(instance: ContestInstance) -> tuple[float, float]:
    if classify_regime(instance).I2:
        return aggregate_range(instance)
    top = instance.R * max(instance.a)
    return 1e-6 * top, top


def max_share_slope(instance: ContestInstance, interval=None, samples: int = 1000) -> float:
    """Largest sampled ``|d share / d A|`` over every player's continuity pieces."""
    lo, hi = interval if interval is not None else _default_interval(instance)
    R = instance.R
    worst = 0.0
    for p in instance.players:
        top = hi
        if p.r > 1:
            top = min(hi, thresholds(p, R).upperA)
            if top < lo:
                continue  # share is identically zero on the interval
        for A in np.linspace(lo, top, samples):
            worst = max(worst, abs(_slope(p, R, float(A))))
    return worst


def rho_bound(instance: ContestInstance, interval=None, samples: int = 1000, safety: float = 2.0) -> float:
    """Upper bound on the share slope used to space the FPTAS grid.

    Dense sampling (``samples`` points per player per continuity piece) times a
    safety factor.  Defaults to ``[min lowerA, max upperA]``; without convex
    players the range ``(0, R max a]`` is used instead.
    """
    return max(safety * max_share_slope(instance, interval, samples), 1e-12)
