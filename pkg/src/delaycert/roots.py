"""Bisection for strictly increasing scalar maps (unique-root equations)."""
from __future__ import annotations


def bisect_increasing(fn, target, upper, rel_tol: float = 1e-15,
                      max_iter: int = 200) -> float:
    """Root of fn(r) = target for strictly increasing fn on [0, upper].

    The bracket is tightened until its width is below rel_tol relative to
    the root, which keeps the equation residual well under 1e-12 relative.
    """
    if target == 0.0:
        return 0.0
    if target < 0:
        raise ValueError("target must be nonnegative for an increasing map from 0")
    hi = float(upper)
    grow = 0
    while fn(hi) < target:
        hi *= 2.0
        grow += 1
        if grow > 120:
            raise ValueError("failed to bracket the root")
    lo = 0.0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if fn(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * hi:
            break
    return 0.5 * (lo + hi)


__all__ = ["bisect_increasing"]
