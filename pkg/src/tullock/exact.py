"""Exact pure-equilibrium solvers for the regimes without medium elasticity."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._aggregate import certificate_at, find_aggregate
from .best_response import thresholds
from .certificates import EquilibriumCertificate
from .contest import ContestInstance, EffortProfile, Regime, classify_regime
from .errors import DomainError, MaxIterationsExceeded
from .verify import check_pne


class Status(str, enum.Enum):
    FOUND = "found"
    NO_PNE = "no-pne"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    certificates: tuple[EquilibriumCertificate, ...] = field(default=())
    reason: str = ""


@dataclass(frozen=True)
class MirrorDescentConfig:
    step_size: float = 0.5
    max_iterations: int = 100_000
    stop_tolerance: float = 1e-10

    def __post_init__(self):
        if self.step_size <= 0:
            raise DomainError("step_size must be positive")
        if self.max_iterations <= 0 or self.stop_tolerance <= 0:
            raise DomainError("max_iterations and stop_tolerance must be positive")


@dataclass(frozen=True)
class MirrorDescentResult:
    profile: EffortProfile
    iterations: int
    residual: float


def solve_small_elasticity(instance: ContestInstance, tol: float = 1e-10) -> EquilibriumCertificate:
    """Unique equilibrium when every ``r <= 1``, by bisection on the aggregate."""
    if classify_regime(instance).tag is not Regime.ALL_SMALL:
        raise DomainError("solve_small_elasticity requires every r <= 1")
    A = find_aggregate(instance, (), 0.0, math.inf, tol)
    if A is None:  # pragma: no cover - existence holds in this regime
        raise RuntimeError("bisection failed to bracket the equilibrium aggregate")
    return certificate_at(instance, A)


def _gradients(x, a, r, R):
    y = a * x**r
    total = y.sum()
    return R * a * r * x ** (r - 1) * (total - y) / total**2 - 1.0


def solve_mirror_descent(
    instance: ContestInstance,
    config: MirrorDescentConfig | None = None,
    x0=None,
) -> MirrorDescentResult:
    """Simultaneous mirror-descent play with exact utility gradients.

    Uses the negative-entropy mirror map on the positive orthant, so every
    player moves ``x_i <- x_i * exp(step * du_i/dx_i)``.  In log-effort
    coordinates the curvature of each utility is bounded independently of the
    effort scale, which a Euclidean map lacks when r < 1 (curvature grows like
    x^(r-2) near zero).  Exponents are clipped to [-1, 1] far from
    equilibrium.  Stops once no effort moves by ``stop_tolerance`` or more.
    """
    if classify_regime(instance).tag is not Regime.ALL_SMALL:
        raise DomainError("solve_mirror_descent requires every r <= 1")
    cfg = config or MirrorDescentConfig()
    R = instance.R
    a = np.asarray(instance.a, dtype=float)
    r = np.asarray(instance.r, dtype=float)
    x = np.full(instance.n, 0.1 * R / instance.n) if x0 is None else np.asarray(x0, dtype=float).copy()
    if np.any(x < 0):
        raise DomainError("starting efforts must be non-negative")
    # the multiplicative update cannot leave zero
    x[x == 0] = 1e-3 * R / instance.n
    move = math.inf
    for it in range(cfg.max_iterations + 1):
        nxt = x * np.exp(np.clip(cfg.step_size * _gradients(x, a, r, R), -1.0, 1.0))
        move = float(np.max(np.abs(nxt - x)))
        if move < cfg.stop_tolerance:
            return MirrorDescentResult(EffortProfile(tuple(x)), it, move)
        x = nxt
    raise MaxIterationsExceeded(
        f"no convergence after {cfg.max_iterations} iterations", EffortProfile(tuple(x)), move
    )


def solve_mixed_regime(instance: ContestInstance, tol: float = 1e-10) -> SolveOutcome:
    """All pure equilibria when no elasticity lies in (1, 2].

    At most one player with ``r > 2`` can be active, so the candidates are the
    concave players alone and, for each large player ``j``, the concave
    players plus ``j``.  Each candidate is a monotone one-dimensional search;
    hits are kept only if they pass the full equilibrium check.
    """
    rc = classify_regime(instance)
    if rc.tag is Regime.HAS_MEDIUM:
        return SolveOutcome(Status.NOT_APPLICABLE, reason="HasMedium")
    if not rc.I1:
        # all r > 2: no pure equilibrium exists, nothing to search
        return SolveOutcome(Status.NO_PNE, reason="every r > 2")
    R = instance.R
    ts = {j: thresholds(instance.players[j], R) for j in rc.I2}
    candidates = []
    lo = max((t.lowerA for t in ts.values()), default=0.0)
    A = find_aggregate(instance, (), lo, math.inf, tol)
    if A is not None:
        candidates.append(certificate_at(instance, A))
    for j in rc.I2:
        lo = max((ts[k].lowerA for k in rc.I2 if k != j), default=0.0)
        hi = ts[j].upperA
        if lo > hi:
            continue
        A = find_aggregate(instance, (j,), lo, hi, tol)
        if A is not None:
            candidates.append(certificate_at(instance, A, (j,)))
    found = [c for c in candidates if check_pne(instance, c, tol).passed]
    if not found:
        return SolveOutcome(Status.NO_PNE, reason="no candidate active set satisfies the equilibrium conditions")
    found.sort(key=lambda c: c.aggregate)
    return SolveOutcome(Status.FOUND, tuple(found))
