"""Composite Simpson integration with interval doubling.

The integrands in this package are smooth between known breakpoints (window
edges and atom locations), so each piece is integrated by composite Simpson
with the point count doubled until two successive estimates agree.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

DEFAULT_TOL = 1e-9


def composite_simpson(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, n: int) -> float:
    """Simpson's rule on [a, b] with n subintervals (n even)."""
    x = np.linspace(a, b, n + 1)
    y = np.asarray(f(x), dtype=float)
    h = (b - a) / n
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def adaptive_simpson(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    *,
    tol: float = DEFAULT_TOL,
    n0: int = 8,
    max_doublings: int = 16,
) -> float:
    """Integrate f over [a, b], doubling the grid until estimates agree within tol."""
    if b <= a:
        return 0.0
    n = n0
    prev = composite_simpson(f, a, b, n)
    for _ in range(max_doublings):
        n *= 2
        cur = composite_simpson(f, a, b, n)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
    return prev


def integrate_pieces(
    f: Callable[[np.ndarray], np.ndarray],
    breakpoints: Sequence[float],
    *,
    tol: float = DEFAULT_TOL,
) -> float:
    """Integrate f over the pieces between consecutive sorted breakpoints.

    Breakpoints are deduplicated; the per-piece tolerance is scaled so the
    summed error stays within tol.
    """
    pts = np.unique(np.asarray(breakpoints, dtype=float))
    if pts.size < 2:
        return 0.0
    piece_tol = tol / max(1, pts.size - 1)
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        if b > a:
            total += adaptive_simpson(f, float(a), float(b), tol=piece_tol)
    return total
