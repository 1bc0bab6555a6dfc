"""FPTAS for ε-approximate equilibria when some elasticities are medium.

Between the smallest lower threshold and the largest upper threshold the
aggregate is discretised on a grid of spacing ``δ = ε/(2ρn)`` together with
every threshold.  At each node the players split into certain participants,
excluded players and uncertain ones; a two-sided trimmed subset sum decides
whether some choice of the uncertain players brings the share sum into
``(1-ε, 1+ε)``.  Outside the threshold range the active set is fixed and a
bisection on the aggregate suffices.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._aggregate import certificate_at, find_aggregate
from .best_response import BOUNDARY_RTOL, BRKind, best_response_share, rho_bound, thresholds
from .certificates import EpsSolution, EquilibriumCertificate, as_eps_solution
from .contest import ContestInstance, classify_regime
from .errors import DomainError, NoConvexPlayers, TooLarge
from .verify import check_eps_solution, check_pne

MAX_NODES = 5_000_000
# prefilter decisions need this much margin so float noise never drops a node
_PREFILTER_SLACK = 1e-9


@dataclass(frozen=True)
class ShareItem:
    player_index: int
    share_value: float


@dataclass(frozen=True)
class CandidateNodes:
    nodes: tuple[float, ...]
    delta: float
    boundary_points: tuple[float, ...]


@dataclass(frozen=True)
class SearchReport:
    solutions: tuple[EpsSolution, ...]
    exact: tuple[EquilibriumCertificate, ...]
    nodes_total: int
    nodes_verified: int
    delta: float
    rho: float | None
    epsilon: float
    extra: dict = field(default_factory=dict)


def _check_eps(eps: float) -> None:
    if not (math.isfinite(eps) and 0 < eps < 1):
        raise DomainError(f"eps must lie in (0, 1), got {eps}")


def choose_delta(instance: ContestInstance, eps: float, rho: float | None = None) -> float:
    """Grid spacing ``ε/(2ρn)``, half of the largest spacing that keeps adjacent share sums within ε."""
    if not (math.isfinite(eps) and eps > 0):
        raise DomainError(f"eps must be positive, got {eps}")
    if rho is None:
        rho = rho_bound(instance)
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    return eps / (2.0 * rho * instance.n)


def build_candidate_nodes(instance: ContestInstance, delta: float, max_nodes: int = MAX_NODES) -> CandidateNodes:
    """Grid from the smallest lower threshold to the largest upper one, plus every threshold."""
    if not (math.isfinite(delta) and delta > 0):
        raise DomainError(f"delta must be positive, got {delta}")
    I2 = classify_regime(instance).I2
    if not I2:
        raise NoConvexPlayers("candidate nodes need at least one player with r > 1")
    bounds = []
    for j in I2:
        t = thresholds(instance.players[j], instance.R)
        bounds += [t.lowerA, t.upperA]
    lo, hi = min(bounds), max(bounds)
    size = _grid_size(lo, hi, delta)
    if size + len(bounds) > max_nodes:
        raise TooLarge(f"{size} grid nodes exceeds the guard of {max_nodes}")
    grid = lo + delta * np.arange(size)
    nodes = np.unique(np.concatenate([grid, bounds]))
    return CandidateNodes(tuple(nodes.tolist()), float(delta), tuple(sorted(set(bounds))))


def trim_from_below(values: Sequence, delta: float, key=None) -> list:
    """Keep the first value and then only values above ``(1+δ)`` times the last kept one."""
    key = key or (lambda v: v)
    out = [values[0]]
    last = key(values[0])
    for v in values[1:]:
        if key(v) > (1.0 + delta) * last:
            out.append(v)
            last = key(v)
    return out


def trim_from_above(values: Sequence, delta: float, key=None) -> list:
    """Mirror of :func:`trim_from_below` for a descending list."""
    key = key or (lambda v: v)
    out = [values[0]]
    last = key(values[0])
    for v in values[1:]:
        if key(v) < (1.0 - delta) * last:
            out.append(v)
            last = key(v)
    return out


def _value(entry):
    return entry[0]


def approx_subset_sum(base: float, items: Sequence[ShareItem], eps: float) -> Optional[tuple[ShareItem, ...]]:
    """Items whose shares plus ``base`` fall strictly inside ``(1-ε, 1+ε)``, or ``None``.

    Two lists of partial sums are grown item by item, one trimmed from below
    and one from above with ``δ = ε/(2m)``.  Each entry keeps the indices that
    produced it, and a candidate is accepted only after its total is recomputed
    from the original items.  Sums at or above ``1+ε`` can never come back
    into the band, so they are dropped early.
    """
    if not (0 < eps < 1):
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    items = list(items)
    lo_band, hi_band = 1.0 - eps, 1.0 + eps

    def total(idx):
        return math.fsum([base] + [items[k].share_value for k in idx])

    best: tuple[float, tuple[int, ...]] | None = None

    def consider(idx):
        nonlocal best
        t = total(idx)
        if lo_band < t < hi_band and (best is None or abs(t - 1.0) < best[0]):
            best = (abs(t - 1.0), idx)

    consider(())
    if items:
        d = eps / (2.0 * len(items))
        X = [(base, ())]
        Y = [(base, ())]
        for k, it in enumerate(items):
            s = it.share_value
            X = sorted(X + [(v + s, idx + (k,)) for v, idx in X if v + s < hi_band], key=_value)
            X = trim_from_below(X, d, _value)
            Y = sorted(Y + [(v + s, idx + (k,)) for v, idx in Y if v + s < hi_band], key=_value, reverse=True)
            Y = trim_from_above(Y, d, _value)
        for v, idx in X + Y:
            if lo_band < v < hi_band:
                consider(idx)
    if best is None:
        return None
    return tuple(items[k] for k in best[1])


def verify_node(instance: ContestInstance, A: float, eps: float) -> Optional[EpsSolution]:
    """ε-solution supported at aggregate ``A``, or ``None``.

    Concave players and convex players below their lower threshold take part
    for sure, convex players above their upper threshold sit out, and the rest
    (thresholds included) are uncertain items for the subset sum.
    """
    R = instance.R
    base_idx, base_sh, items = [], [], []
    for i, p in enumerate(instance.players):
        br = best_response_share(p, R, A)
        if br.kind is BRKind.SHARE:
            base_idx.append(i)
            base_sh.append(br.share)
        elif br.kind is BRKind.ZERO_OR_SHARE:
            items.append(ShareItem(i, br.share))
    base = math.fsum(base_sh)
    chosen = approx_subset_sum(base, items, eps)
    if chosen is None:
        return None
    pairs = sorted(list(zip(base_idx, base_sh)) + [(it.player_index, it.share_value) for it in chosen])
    active = tuple(i for i, _ in pairs)
    shares = tuple(s for _, s in pairs)
    return EpsSolution(float(A), active, shares, math.fsum(shares), eps, "node")


def _node_stats(instance: ContestInstance, A: float) -> tuple[float, float, float]:
    # (certain share sum, uncertain share sum, smallest uncertain share)
    certain, unsure = [], []
    for p in instance.players:
        br = best_response_share(p, instance.R, A)
        if br.kind is BRKind.SHARE:
            certain.append(br.share)
        elif br.kind is BRKind.ZERO_OR_SHARE:
            unsure.append(br.share)
    return math.fsum(certain), math.fsum(unsure), min(unsure, default=math.inf)


def _first_true(pred, lo: int, hi: int) -> int:
    # smallest k in [lo, hi) with pred(k), assuming pred is monotone false -> true
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def _passing_ranges(instance: ContestInstance, node, start: int, stop: int, eps: float):
    """Index ranges within ``[start, stop)`` where a hit is not ruled out.

    The caller guarantees that no player changes classification inside the
    range, so the certain sum, the uncertain sum and the smallest uncertain
    share all decrease with the aggregate.  A hit needs ``S0 < 1+ε`` (a
    suffix), ``S0 + Σ items > 1-ε`` (a prefix) and either ``S0 > 1-ε`` (a
    prefix) or ``S0 + min item < 1+ε`` (a suffix).  Binary search locates
    each cut; the slack only ever keeps extra nodes.
    """
    cache: dict[int, tuple[float, float, float]] = {}

    def stats(k):
        if k not in cache:
            cache[k] = _node_stats(instance, node(k))
        return cache[k]

    sl = _PREFILTER_SLACK
    a0 = _first_true(lambda k: stats(k)[0] < 1.0 + eps + sl, start, stop)
    b0 = _first_true(lambda k: not stats(k)[0] + stats(k)[1] > 1.0 - eps - sl, start, stop)
    c1 = _first_true(lambda k: not stats(k)[0] > 1.0 - eps - sl, start, stop)
    c2 = _first_true(lambda k: stats(k)[0] + stats(k)[2] < 1.0 + eps + sl, start, stop)
    out = []
    for lo, hi in ((start, c1), (c2, stop)):
        lo, hi = max(lo, a0), min(hi, b0)
        if lo < hi:
            out.append((lo, hi))
    if len(out) == 2 and out[0][1] >= out[1][0]:
        out = [(out[0][0], max(out[0][1], out[1][1]))]
    return out


def _on_grid(b: float, lo: float, delta: float, size: int) -> bool:
    k = round((b - lo) / delta)
    return 0 <= k < size and lo + delta * k == b


def _grid_size(lo: float, hi: float, delta: float) -> int:
    steps = math.floor((hi - lo) / delta + 1e-12)
    while steps > 0 and lo + delta * steps > hi:
        steps -= 1
    return steps + 1


def _dedup(solutions: list[EpsSolution], delta: float) -> list[EpsSolution]:
    # runs of the same active set with aggregates within delta collapse to
    # the member whose share sum is closest to one
    groups: dict[tuple[int, ...], list[list[EpsSolution]]] = {}
    for sol in sorted(solutions, key=lambda s: (s.active, s.aggregate)):
        runs = groups.setdefault(sol.active, [])
        if runs and sol.aggregate - runs[-1][-1].aggregate <= delta * (1.0 + 1e-9):
            runs[-1].append(sol)
        else:
            runs.append([sol])
    kept = [min(run, key=lambda s: abs(s.share_sum - 1.0)) for runs in groups.values() for run in runs]
    return sorted(kept, key=lambda s: (s.aggregate, s.active))


def search_eps_ne_report(
    instance: ContestInstance,
    eps: float = 1e-3,
    delta: float | None = None,
    rho: float | None = None,
    tol: float = 1e-10,
    prefilter: bool = True,
) -> SearchReport:
    """Run the full ε-equilibrium search and report solutions plus work counters.

    ``nodes_total`` counts every candidate node; ``nodes_verified`` counts the
    nodes that reached the subset-sum step (all of them when ``prefilter`` is
    off).  Solutions from the two fixed-active-set regions that satisfy the
    exact conditions are also returned as certificates.
    """
    _check_eps(eps)
    rc = classify_regime(instance)
    found: list[EpsSolution] = []
    exact: list[EquilibriumCertificate] = []

    def keep(cert: EquilibriumCertificate) -> None:
        sol = as_eps_solution(cert, eps, "bisection")
        if check_eps_solution(instance, sol, tol=max(tol, 1e-9)).passed:
            found.append(sol)
            if check_pne(instance, cert, tol=max(tol, 1e-9)).passed:
                exact.append(cert)

    if not rc.I2:
        A = find_aggregate(instance, (), 0.0, math.inf, tol)
        if A is not None:
            keep(certificate_at(instance, A))
        return SearchReport(tuple(found), tuple(exact), 0, 0, 0.0, None, eps)

    ts = [thresholds(instance.players[j], instance.R) for j in rc.I2]
    A_lo = min(t.lowerA for t in ts)
    A_hi = max(t.upperA for t in ts)
    # (i) below every lower threshold all convex players participate
    A = find_aggregate(instance, rc.I2, 0.0, A_lo, tol)
    if A is not None:
        keep(certificate_at(instance, A, rc.I2))
    # (ii) above every upper threshold only concave players remain
    A = find_aggregate(instance, (), A_hi, math.inf, tol)
    if A is not None:
        keep(certificate_at(instance, A))

    if delta is None:
        rho = rho_bound(instance) if rho is None else rho
        delta = choose_delta(instance, eps, rho)
    # the grid stays implicit: node k is A_lo + k delta
    size = _grid_size(A_lo, A_hi, delta)

    def node(k):
        return A_lo + delta * k

    bounds = sorted({b for t in ts for b in (t.lowerA, t.upperA)})
    verified = 0

    def visit(A):
        nonlocal verified
        verified += 1
        sol = verify_node(instance, A, eps)
        if sol is not None:
            found.append(sol)

    if prefilter:
        # classification flips where a node crosses a slackened threshold
        cuts = {0, size}
        for t in ts:
            low, up = t.lowerA * (1.0 - BOUNDARY_RTOL), t.upperA * (1.0 + BOUNDARY_RTOL)
            cuts.add(_first_true(lambda k: not node(k) < low, 0, size))
            cuts.add(_first_true(lambda k: node(k) > up, 0, size))
        cuts = sorted(cuts)
        for start, stop in zip(cuts, cuts[1:]):
            for lo, hi in _passing_ranges(instance, node, start, stop, eps) if stop > start else ():
                for k in range(lo, hi):
                    visit(node(k))
    else:
        for k in range(size):
            visit(node(k))
    extra = [b for b in bounds if not _on_grid(b, A_lo, delta, size)]
    for b in extra:
        if not prefilter or _passing_ranges(instance, lambda _: b, 0, 1, eps):
            visit(b)
    nodes_total = size + len(extra)
    sols = _dedup(found, delta)
    exact.sort(key=lambda c: c.aggregate)
    return SearchReport(tuple(sols), tuple(exact), nodes_total, verified, float(delta), rho, eps)


def search_eps_ne(instance: ContestInstance, eps: float = 1e-3, delta: float | None = None,
                  rho: float | None = None) -> list[EpsSolution]:
    """All ε-approximate solutions found by the grid search, deduplicated."""
    return list(search_eps_ne_report(instance, eps, delta, rho).solutions)
