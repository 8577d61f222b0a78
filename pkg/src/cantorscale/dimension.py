"""Hausdorff-dimension estimation via the depth-n pressure equation.

The estimator is the root of the normalized Moran/pressure sum

    sum over words of length n+1 of (|I_w| / |domain|)^delta = 1,

which returns exactly delta = 1 when the cylinders tile the whole
interval.  The sum is strictly decreasing in delta, so plain bisection
converges; the cross-depth pair (delta at depth-1, delta at depth)
brackets the systematic error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .branches import Partition, partition_levels
from .errors import DomainError
from .families import MapFamily


@dataclass
class DimensionEstimate:
    epsilon: float
    depth: int
    delta: float
    bracket: tuple[float, float]
    residual: float


def pressure_sum(part: Partition, delta: float,
                 domain_length: float = 2.0) -> float:
    """Compensated sum of relative cylinder lengths to the power delta."""
    if not 0.0 <= delta <= 2.0:
        raise DomainError("delta must lie in [0, 2]")
    rel = part.lengths / domain_length
    return math.fsum((rel ** delta).tolist())


def _solve_delta(part: Partition, domain_length: float,
                 tol: float = 1e-10) -> tuple[float, float]:
    lo, hi = 0.0, 2.0
    # pressure_sum(0) = cylinder count >= 2 > 1; decreasing in delta
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        s = pressure_sum(part, mid, domain_length)
        if abs(s - 1.0) < tol:
            return mid, abs(s - 1.0)
        if s > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14:
            break
    delta = 0.5 * (lo + hi)
    return delta, abs(pressure_sum(part, delta, domain_length) - 1.0)


def hd_estimate(family: MapFamily, eps: float, depth: int) -> DimensionEstimate:
    """Dimension estimate at one eps with the cross-depth bracket."""
    if depth < 6:
        raise DomainError("hd_estimate needs depth >= 6")
    levels = partition_levels(family, eps, depth)
    dlen = family.domain[1] - family.domain[0]
    d_prev, _ = _solve_delta(levels[depth - 1], dlen)
    d_last, residual = _solve_delta(levels[depth], dlen)
    lo, hi = sorted((d_prev, d_last))
    return DimensionEstimate(epsilon=eps, depth=depth, delta=d_last,
                             bracket=(lo, hi), residual=residual)


def hd_curve(family: MapFamily, eps_grid, depth: int):
    """Per-eps dimension estimates and the fitted defect exponent.

    Returns ``(estimates, slope)`` with ``slope`` the least-squares slope
    of ``log(1 - delta)`` against ``log eps``.
    """
    eps_list = sorted(float(e) for e in eps_grid)
    if any(e <= 0 for e in eps_list):
        raise DomainError("hd_curve requires positive eps")
    ests = [hd_estimate(family, e, depth) for e in eps_list]
    defect = np.asarray([max(1.0 - est.delta, 1e-300) for est in ests])
    slope = float(np.polyfit(np.log(eps_list), np.log(defect), 1)[0])
    return ests, slope


def delta0(eps: float, C6: float) -> float:
    """log 2 / (log 2 - log(1 - C6 sqrt(eps))); the self-similar lower-model root.

    Satisfies 2 ((1 - C6 sqrt(eps)) / 2)^delta0 = 1 exactly.
    """
    t = C6 * math.sqrt(eps)
    if not t < 1.0:
        raise DomainError("delta0 requires C6 * sqrt(eps) < 1")
    if t == 0.0:
        return 1.0
    return math.log(2.0) / (math.log(2.0) - math.log(1.0 - t))


def zero_run_count(n: int, max_run: int = 3) -> int:
    """Binary strings of length n whose longest zero run is < max_run.

    Linear recurrence over the trailing-run state; for ``max_run = 3``
    this is the tribonacci-style a(n) = a(n-1) + a(n-2) + a(n-3).
    """
    if not 1 <= n <= 62:
        raise DomainError("n must lie in [1, 62] (overflow guard)")
    if max_run < 1:
        raise DomainError("max_run must be >= 1")
    # state[r] = number of valid strings with exactly r trailing zeros
    state = [0] * max_run
    state[0] = 1  # empty string
    for _ in range(n):
        total = sum(state)
        new = [0] * max_run
        new[0] = total                 # append a one: trailing run resets
        for r in range(1, max_run):
            new[r] = state[r - 1]      # append a zero: run grows, must stay < max_run
        state = new
    return sum(state)


def zero_run_count_bruteforce(n: int, max_run: int = 3) -> int:
    """Direct enumeration cross-check (n <= 20)."""
    if n > 20:
        raise DomainError("brute force capped at n = 20")
    count = 0
    for m in range(1 << n):
        bits = format(m, f"0{n}b")
        longest = max((len(run) for run in bits.split("1")), default=0)
        if longest < max_run:
            count += 1
    return count
