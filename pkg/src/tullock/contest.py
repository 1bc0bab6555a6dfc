"""Contest definition, production/cost transforms, utilities and regime tags.

A contest is a reward ``R > 1`` and ``n >= 2`` players, each with a
production efficiency ``a`` and elasticity ``r``.  Player ``i`` turns effort
``x`` into production ``y = a * x**r`` and wins with probability ``y / A``,
where ``A`` is the aggregate production.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import AllZeroProfile, DomainError


@dataclass(frozen=True)
class Player:
    a: float
    r: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError(f"a must be positive, got {self.a!r}")
        if not (math.isfinite(self.r) and self.r > 0):
            raise DomainError(f"r must be positive, got {self.r!r}")


@dataclass(frozen=True)
class ContestInstance:
    R: float
    players: tuple[Player, ...]

    def __post_init__(self):
        object.__setattr__(self, "players", tuple(self.players))
        if not (math.isfinite(self.R) and self.R > 1):
            raise DomainError(f"R must exceed 1, got {self.R!r}")
        if len(self.players) < 2:
            raise DomainError(f"need at least 2 players, got {len(self.players)}")

    @classmethod
    def from_lists(cls, R: float, a: Sequence[float], r: Sequence[float]) -> "ContestInstance":
        if len(a) != len(r):
            raise DomainError("a and r must have equal length")
        return cls(float(R), tuple(Player(float(ai), float(ri)) for ai, ri in zip(a, r)))

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def a(self) -> tuple[float, ...]:
        return tuple(p.a for p in self.players)

    @property
    def r(self) -> tuple[float, ...]:
        return tuple(p.r for p in self.players)


@dataclass(frozen=True)
class EffortProfile:
    x: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(float(v) for v in self.x))
        if any(v < 0 for v in self.x):
            raise DomainError("efforts must be non-negative")


@dataclass(frozen=True)
class ProductionProfile:
    y: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "y", tuple(float(v) for v in self.y))
        if any(v < 0 for v in self.y):
            raise DomainError("productions must be non-negative")

    @property
    def A(self) -> float:
        return math.fsum(self.y)


class Regime(str, enum.Enum):
    ALL_SMALL = "AllSmall"
    ALL_LARGE = "AllLarge"
    MIXED_NO_MEDIUM = "MixedNoMedium"
    HAS_MEDIUM = "HasMedium"


@dataclass(frozen=True)
class RegimeClass:
    tag: Regime
    I1: tuple[int, ...]
    I2: tuple[int, ...]
    medium: tuple[int, ...] = field(default=())

    @property
    def n1(self) -> int:
        return len(self.I1)

    @property
    def n2(self) -> int:
        return len(self.I2)


def _pow(base: float, exponent: float) -> float:
    # 0**r is 0 for r > 0; avoid log(0)
    if base == 0.0:
        return 0.0
    return math.exp(exponent * math.log(base))


def production(player: Player, x: float) -> float:
    """Production ``a * x**r`` of effort ``x``."""
    if x < 0:
        raise DomainError(f"effort must be non-negative, got {x!r}")
    return player.a * _pow(x, player.r)


def cost_of_production(player: Player, y: float) -> float:
    """Effort ``(y/a)**(1/r)`` needed to produce ``y``; inverse of :func:`production`."""
    if y < 0:
        raise DomainError(f"production must be non-negative, got {y!r}")
    return _pow(y / player.a, 1.0 / player.r)


def _values(profile, attr):
    return tuple(getattr(profile, attr)) if hasattr(profile, attr) else tuple(profile)


def utility_effort(instance: ContestInstance, profile, i: int) -> float:
    """Payoff of player ``i`` at an effort profile (sequence or EffortProfile)."""
    x = _values(profile, "x")
    ys = [production(p, xi) for p, xi in zip(instance.players, x)]
    total = math.fsum(ys)
    if total == 0.0:
        raise AllZeroProfile("every production is zero")
    return ys[i] / total * instance.R - x[i]


def utility_production(instance: ContestInstance, profile, i: int) -> float:
    """Payoff of player ``i`` written in production space."""
    y = _values(profile, "y")
    total = math.fsum(y)
    if total == 0.0:
        raise AllZeroProfile("aggregate production is zero")
    return y[i] / total * instance.R - cost_of_production(instance.players[i], y[i])


def winning_probabilities(instance: ContestInstance, profile) -> tuple[float, ...]:
    x = _values(profile, "x")
    ys = [production(p, xi) for p, xi in zip(instance.players, x)]
    total = math.fsum(ys)
    if total == 0.0:
        raise AllZeroProfile("every production is zero")
    return tuple(y / total for y in ys)


def classify_regime(instance: ContestInstance) -> RegimeClass:
    rs = instance.r
    I1 = tuple(i for i, r in enumerate(rs) if r <= 1)
    I2 = tuple(i for i, r in enumerate(rs) if r > 1)
    medium = tuple(i for i in I2 if rs[i] <= 2)
    if not I2:
        tag = Regime.ALL_SMALL
    elif medium:
        tag = Regime.HAS_MEDIUM
    elif not I1:
        tag = Regime.ALL_LARGE
    else:
        tag = Regime.MIXED_NO_MEDIUM
    return RegimeClass(tag, I1, I2, medium)
