"""Bracketed scalar root finders for monotone decreasing functions."""
from __future__ import annotations

import math
from typing import Callable

_EPS = 2.220446049250313e-16


def newton_decreasing(
    f: Callable[[float], float],
    df: Callable[[float], float],
    lo: float,
    hi: float,
    x0: float | None = None,
    maxiter: int = 200,
) -> float:
    """Root of a decreasing ``f`` on ``[lo, hi]`` with ``f(lo) >= 0 >= f(hi)``.

    Newton steps are taken when they stay inside the current bracket,
    otherwise the bracket is bisected.  Iterates to full double precision.
    """
    x = 0.5 * (lo + hi) if x0 is None else min(max(x0, lo), hi)
    for _ in range(maxiter):
        fx = f(x)
        if fx == 0.0:
            return x
        if fx > 0:
            lo = x
        else:
            hi = x
        if hi - lo <= 2 * _EPS * max(abs(lo), abs(hi)):
            return 0.5 * (lo + hi)
        d = df(x)
        nxt = x - fx / d if (d < 0 and math.isfinite(d)) else math.nan
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= 2 * _EPS * abs(x):
            return nxt
        x = nxt
    return x


def bisect_decreasing(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    target: float = 0.0,
    maxiter: int = 300,
) -> float:
    """Point where a decreasing ``f`` crosses ``target`` on ``[lo, hi]``.

    Plain bisection down to adjacent floats; the caller is responsible for
    checking that the endpoints actually bracket the crossing.
    """
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        v = f(mid)
        if v == target:
            return mid
        if v > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
