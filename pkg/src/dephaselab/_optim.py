"""Deterministic derivative-free minimization helpers.

Everything here is seed-free: restarts come from a Halton sequence and the
simplex refinement is scipy's Nelder-Mead, which is deterministic for a
given start.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize

_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _radical_inverse(index: int, base: int) -> float:
    inv = 0.0
    factor = 1.0 / base
    while index > 0:
        index, digit = divmod(index, base)
        inv += digit * factor
        factor /= base
    return inv


def halton(count: int, dim: int, skip: int = 0) -> np.ndarray:
    """`count` low-discrepancy points in [0, 1)^dim (indices start at skip+1)."""
    if dim > len(_PRIMES):
        raise ValueError(f"halton supports up to {len(_PRIMES)} dimensions")
    points = np.empty((count, dim))
    for row in range(count):
        idx = skip + row + 1
        for col in range(dim):
            points[row, col] = _radical_inverse(idx, _PRIMES[col])
    return points


def nelder_mead(fn, x0, xatol: float = 1e-9, fatol: float = 1e-12, maxfev: int = 20000):
    """Simplex minimization; returns (x, value)."""
    res = minimize(
        fn,
        np.asarray(x0, dtype=float),
        method="Nelder-Mead",
        options={"xatol": xatol, "fatol": fatol, "maxfev": maxfev, "maxiter": maxfev},
    )
    return res.x, float(res.fun)


def multistart_nelder_mead(fn, lower, upper, starts_per_round: int = 20,
                           round_improvement: float = 1e-9, max_rounds: int = 5,
                           xatol: float = 1e-9, fatol: float = 1e-12):
    """Halton multi-start simplex minimization over a box.

    Rounds of `starts_per_round` starts run until a whole round improves the
    incumbent by less than `round_improvement`.  Ties go to the earliest
    start, so the reduction is deterministic.

    Returns (best_x, best_value, starts_used).
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    dim = lower.size
    best_x = None
    best_val = np.inf
    used = 0
    for round_idx in range(max_rounds):
        incumbent = best_val
        points = halton(starts_per_round, dim, skip=round_idx * starts_per_round)
        for point in points:
            x0 = lower + point * (upper - lower)
            x, val = nelder_mead(fn, x0, xatol=xatol, fatol=fatol)
            used += 1
            if val < best_val - 1e-15:
                best_val = val
                best_x = x
        if incumbent - best_val < round_improvement:
            break
    return best_x, best_val, used
