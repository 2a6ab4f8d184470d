"""Bracketing root scan on a geometric grid with local refinement.

All transcendental equations in this package are solved the same way: sample
the residual on a geometric grid over many decades, locate sign changes, and
polish each bracket with Brent's method.  Non-finite samples (overflow of a
steep law, singular points) are treated as holes in the grid rather than
errors, since they routinely occur at the extreme ends of the scan range.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import NoRootError

__all__ = ["find_roots"]


def _sample(fn: Callable[[float], float], x: float) -> float:
    try:
        v = fn(x)
    except (OverflowError, ValueError, ZeroDivisionError):
        return math.nan
    return v if math.isfinite(v) else math.nan


def find_roots(fn: Callable[[float], float], lo: float, hi: float,
               panels: int = 400, expansions: int = 2,
               expand_factor: float = 1e4, rtol: float = 1e-12) -> list[float]:
    """All roots of ``fn`` found by sign-change bracketing on [lo, hi].

    On failure the range is widened by ``expand_factor`` on both ends, up to
    ``expansions`` times (with the panel count scaled to keep the grid
    density), before a NoRootError with a sampled trace is raised.
    """
    trace: list[tuple[float, float]] = []
    for attempt in range(expansions + 1):
        n = panels * (attempt + 1)
        grid = np.geomspace(lo, hi, n + 1)
        vals = [_sample(fn, x) for x in grid]
        roots: list[float] = []
        for i in range(n):
            fa, fb = vals[i], vals[i + 1]
            if math.isnan(fa) or math.isnan(fb):
                continue
            if fa == 0.0:
                roots.append(float(grid[i]))
            elif fa * fb < 0.0:
                roots.append(float(brentq(fn, grid[i], grid[i + 1], rtol=rtol)))
        if not math.isnan(vals[-1]) and vals[-1] == 0.0:
            roots.append(float(grid[-1]))
        if roots:
            return roots
        step = max(1, n // 16)
        trace = [(float(grid[i]), vals[i]) for i in range(0, n + 1, step)]
        lo /= expand_factor
        hi *= expand_factor
    raise NoRootError(
        f"no sign change on the scanned range up to [{lo:.3g}, {hi:.3g}]",
        trace=trace)
