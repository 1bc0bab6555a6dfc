"""Share sums over a fixed convex active set and the aggregate that zeroes them.

With the convex participants fixed and every concave player responding via
k1 (including the r = 1 cutoff), the total share is continuous and strictly
decreasing in the aggregate wherever it is positive, so one bisection finds
the unique point where it equals one.
"""
from __future__ import annotations

import math
from typing import Iterable

from ._roots import bisect_decreasing
from .best_response import k1_share, k2_share
from .certificates import EquilibriumCertificate, make_certificate
from .contest import ContestInstance, classify_regime

_MAX_DOUBLINGS = 2000


def share_sum(instance: ContestInstance, A: float, convex_active: Iterable[int], concave=None) -> float:
    R = instance.R
    if concave is None:
        concave = classify_regime(instance).I1
    total = [k1_share(instance.players[i], R, A) for i in concave]
    total += [k2_share(instance.players[j], R, A) for j in convex_active]
    return math.fsum(total)


def find_aggregate(
    instance: ContestInstance,
    convex_active=(),
    lo: float = 0.0,
    hi: float = math.inf,
    tol: float = 1e-10,
) -> float | None:
    """Aggregate in ``[lo, hi]`` where the share sum equals one, or ``None``."""
    convex_active = tuple(convex_active)
    concave = classify_regime(instance).I1
    if not concave and not convex_active:
        return None

    def f(A):
        return share_sum(instance, A, convex_active, concave)

    # every share tends to one as the aggregate vanishes
    f_lo = f(lo) if lo > 0 else float(len(concave) + len(convex_active))
    if f_lo < 1.0 - tol:
        return None
    if math.isinf(hi):
        hi = max(2.0 * lo, instance.R * max(instance.a))
        for _ in range(_MAX_DOUBLINGS):
            if f(hi) < 1.0:
                break
            hi *= 2.0
        else:
            return None
    f_hi = f(hi)
    if f_hi > 1.0 + tol:
        return None
    if hi > lo and f_lo >= 1.0 >= f_hi:
        A = bisect_decreasing(f, lo, hi, 1.0)
        if abs(f(A) - 1.0) <= tol:
            return A
    # degenerate interval or a crossing within tol of an endpoint
    for A, val in ((lo, f_lo), (hi, f_hi)):
        if A > 0 and abs(val - 1.0) <= tol:
            return A
    return None


def certificate_at(instance: ContestInstance, A: float, convex_active=()) -> EquilibriumCertificate:
    R = instance.R
    active, shares = [], []
    for i in classify_regime(instance).I1:
        s = k1_share(instance.players[i], R, A)
        if s > 0:
            active.append(i)
            shares.append(s)
    for j in convex_active:
        active.append(j)
        shares.append(k2_share(instance.players[j], R, A))
    return make_certificate(instance, A, active, shares)
