"""Equilibrium triplets (aggregate, active set, shares) and their ε-relaxation."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .contest import ContestInstance, cost_of_production


@dataclass(frozen=True)
class EquilibriumCertificate:
    aggregate: float
    active: tuple[int, ...]
    shares: tuple[float, ...]
    efforts: tuple[float, ...]

    @property
    def share_sum(self) -> float:
        return math.fsum(self.shares)

    def share_of(self, i: int) -> float:
        try:
            return self.shares[self.active.index(i)]
        except ValueError:
            return 0.0


@dataclass(frozen=True)
class EpsSolution:
    aggregate: float
    active: tuple[int, ...]
    shares: tuple[float, ...]
    share_sum: float
    epsilon: float
    source: str = "node"

    def share_of(self, i: int) -> float:
        try:
            return self.shares[self.active.index(i)]
        except ValueError:
            return 0.0


def induced_efforts(instance: ContestInstance, aggregate: float, active, shares) -> tuple[float, ...]:
    """Effort profile with ``y_i = share_i * aggregate`` for active players, 0 elsewhere."""
    x = [0.0] * instance.n
    for i, s in zip(active, shares):
        x[i] = cost_of_production(instance.players[i], s * aggregate)
    return tuple(x)


def make_certificate(instance: ContestInstance, aggregate: float, active, shares) -> EquilibriumCertificate:
    order = sorted(range(len(active)), key=lambda k: active[k])
    active = tuple(active[k] for k in order)
    shares = tuple(float(shares[k]) for k in order)
    return EquilibriumCertificate(
        float(aggregate), active, shares, induced_efforts(instance, aggregate, active, shares)
    )


def as_eps_solution(cert: EquilibriumCertificate, epsilon: float, source: str = "exact") -> EpsSolution:
    return EpsSolution(cert.aggregate, cert.active, cert.shares, cert.share_sum, epsilon, source)
