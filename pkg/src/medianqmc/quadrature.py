"""One-dimensional quadratures used to center and verify test integrands.

Two deliberately different schemes:

* :func:`adaptive_simpson`: bisection-adaptive Simpson with Richardson
  acceptance, optionally started from a caller-supplied graded partition
  (endpoint kinks/flats get geometrically refined seed intervals).
* :func:`tanh_sinh`: double-exponential substitution, used as the
  independent cross-check in tests.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import AccuracyError

__all__ = ["adaptive_simpson", "tanh_sinh", "graded_breakpoints"]


def graded_breakpoints(lo: float, hi: float, toward: float, levels: int) -> list[float]:
    """Partition [lo, hi] with dyadically shrinking intervals toward one endpoint."""
    if toward not in (lo, hi):
        raise ValueError("grading endpoint must be lo or hi")
    width = hi - lo
    offsets = [width * 2.0 ** -j for j in range(1, levels + 1)]
    if toward == lo:
        pts = [lo] + [lo + off for off in reversed(offsets)] + [hi]
    else:
        pts = [lo] + [hi - off for off in offsets] + [hi]
    return sorted(set(pts))


def _simpson(fa: float, fm: float, fb: float, width: float) -> float:
    return width * (fa + 4.0 * fm + fb) / 6.0


def adaptive_simpson(f: Callable[[float], float], lo: float, hi: float, tol: float,
                     seeds: Sequence[float] | None = None, max_depth: int = 60) -> float:
    """Adaptive Simpson on [lo, hi] with absolute tolerance ``tol``.

    ``seeds`` is an optional initial partition (must include lo and hi); the
    tolerance is split evenly across seed intervals.  Raises AccuracyError if
    the unresolved error after the depth budget exceeds the tolerance.
    """
    if hi <= lo:
        raise ValueError("need lo < hi")
    pts = sorted(set(seeds)) if seeds else [lo, hi]
    if pts[0] != lo or pts[-1] != hi:
        raise ValueError("seed partition must span [lo, hi]")
    local_tol = tol / (len(pts) - 1)

    pieces: list[float] = []
    unresolved = 0.0
    for a0, b0 in zip(pts[:-1], pts[1:]):
        fa, fb = f(a0), f(b0)
        m0 = 0.5 * (a0 + b0)
        fm = f(m0)
        stack = [(a0, b0, fa, fm, fb, _simpson(fa, fm, fb, b0 - a0), 0)]
        while stack:
            a, b, va, vm, vb, whole, depth = stack.pop()
            m = 0.5 * (a + b)
            lm, rm = 0.5 * (a + m), 0.5 * (m + b)
            vlm, vrm = f(lm), f(rm)
            left = _simpson(va, vlm, vm, m - a)
            right = _simpson(vm, vrm, vb, b - m)
            err = (left + right - whole) / 15.0
            if abs(err) <= local_tol * (b - a) / (b0 - a0) or depth >= max_depth:
                pieces.append(left + right + err)
                if depth >= max_depth and abs(err) > local_tol * (b - a) / (b0 - a0):
                    unresolved += abs(err)
            else:
                stack.append((a, m, va, vlm, vm, left, depth + 1))
                stack.append((m, b, vm, vrm, vb, right, depth + 1))
    if unresolved > tol:
        raise AccuracyError(
            f"adaptive Simpson left {unresolved:.3e} unresolved (tol {tol:.3e})")
    return math.fsum(pieces)


def tanh_sinh(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
              tol: float, max_level: int = 12) -> float:
    """Double-exponential quadrature on [lo, hi] (vectorized integrand).

    Substitutes x = tanh((pi/2) sinh t) and refines the trapezoid step until
    two successive halvings agree within ``tol``.
    """
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    t_max = 6.5

    def level_sum(ts: np.ndarray) -> float:
        u = 0.5 * math.pi * np.sinh(ts)
        x = np.tanh(u)
        with np.errstate(over="ignore"):  # cosh^2 -> inf gives weight 0, as intended
            w = 0.5 * math.pi * np.cosh(ts) / np.cosh(u) ** 2
        keep = w > 0.0
        if not keep.all():
            x, w = x[keep], w[keep]
        vals = np.asarray(f(mid + half * x), dtype=np.float64)
        return float(np.sum(w * vals))

    h = 1.0
    total = level_sum(np.arange(-math.floor(t_max), math.floor(t_max) + 1, dtype=np.float64))
    prev_estimate = half * h * total
    agreements = 0
    for _ in range(1, max_level + 1):
        h *= 0.5
        odd = np.arange(1, math.floor(t_max / h) + 1, 2, dtype=np.int64)
        new_ts = np.concatenate([-odd[::-1], odd]) * h
        total += level_sum(new_ts)
        estimate = half * h * total
        if abs(estimate - prev_estimate) <= tol:
            agreements += 1
            if agreements >= 2:
                return estimate
        else:
            agreements = 0
        prev_estimate = estimate
    raise AccuracyError(f"tanh-sinh did not reach tol {tol:.3e} in {max_level} levels")
