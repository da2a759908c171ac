"""Bounded scalar maximization: coarse grid, then golden-section refinement."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on [a, b] until the bracket is shorter than ``tol``.

    Returns ``(x, f(x))`` for the best point evaluated, endpoints included.
    """
    if b < a:
        a, b = b, a
    fa, fb = f(a), f(b)
    best = (a, fa) if fa >= fb else (b, fb)
    if b - a <= tol:
        return best
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    for x, fx in ((c, fc), (d, fd)):
        if fx > best[1]:
            best = (x, fx)
    return best


def grid_then_golden(
    f: Callable[[float], float], lo: float, hi: float, tol: float, grid: int = 200
) -> tuple[float, float]:
    """Global-ish maximum: best of ``grid`` samples, refined within its neighbours."""
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if hi - lo <= tol * (1 + 1e-9):
        return golden_section_max(f, lo, hi, tol)
    xs = np.linspace(lo, hi, max(grid, 3))
    ys = np.array([f(x) for x in xs])
    k = int(np.argmax(ys))
    a, b = xs[max(k - 1, 0)], xs[min(k + 1, len(xs) - 1)]
    x, fx = golden_section_max(f, float(a), float(b), tol)
    if ys[k] > fx:
        return float(xs[k]), float(ys[k])
    return x, fx
