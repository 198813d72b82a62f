"""Independent reference implementations used only to verify the package.

Everything here is deliberately naive (trial division, literal enumeration,
fixed-grid quadrature) and shares no code path with the implementations under
test.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def trial_division_primes(limit: int) -> list[int]:
    """All primes <= limit by bare trial division."""
    out = []
    for m in range(2, limit + 1):
        q = 2
        is_p = True
        while q * q <= m:
            if m % q == 0:
                is_p = False
                break
            q += 1
        if is_p:
            out.append(m)
    return out


def classical_median(values):
    vals = sorted(values)
    return vals[len(vals) // 2]


def literal_wce_squared(p: int, z: tuple[int, ...], alpha: float,
                        subset_weight, h_bound: int) -> float:
    """Truncated dual sum by literal nested enumeration over the l-inf ball.

    subset_weight maps a tuple of 1-based coordinates to gamma_u.
    """
    d = len(z)
    total = 0.0
    for h in itertools.product(range(-h_bound, h_bound + 1), repeat=d):
        if all(v == 0 for v in h):
            continue
        if sum(hj * zj for hj, zj in zip(h, z)) % p != 0:
            continue
        supp = tuple(j + 1 for j, v in enumerate(h) if v != 0)
        r = math.prod(abs(v) ** alpha for v in h if v != 0) / subset_weight(supp)
        total += 1.0 / r ** 2
    return total


def max_dual_term(p: int, z: tuple[int, ...], alpha: float,
                  subset_weight, h_bound: int) -> float:
    """max over enumerated dual h of 1/r(h) (single-term lower bound on the error)."""
    best = 0.0
    d = len(z)
    for h in itertools.product(range(-h_bound, h_bound + 1), repeat=d):
        if all(v == 0 for v in h):
            continue
        if sum(hj * zj for hj, zj in zip(h, z)) % p != 0:
            continue
        supp = tuple(j + 1 for j, v in enumerate(h) if v != 0)
        r = math.prod(abs(v) ** alpha for v in h if v != 0) / subset_weight(supp)
        best = max(best, 1.0 / r)
    return best


def char_sum(p: int, s: int) -> complex:
    """(1/p) * sum_k exp(2 pi i k s / p) by direct complex summation."""
    return sum(complex(math.cos(2 * math.pi * k * s / p),
                       math.sin(2 * math.pi * k * s / p)) for k in range(p)) / p


def zeta_partial_sandwich(s: float, terms: int) -> tuple[float, float]:
    """Rigorous bracket for zeta(s): partial sum + integral tail bounds."""
    k = np.arange(1, terms + 1, dtype=np.float64)
    partial = float(np.sum(k ** -s))
    upper_tail = terms ** (1.0 - s) / (s - 1.0)
    lower_tail = (terms + 1.0) ** (1.0 - s) / (s - 1.0)
    return partial + lower_tail, partial + upper_tail


def fourier_coefficient(f, h: int, panels: int = 1 << 14) -> complex:
    """Integral of f(x) e^{-2 pi i h x} over [0,1] by fixed-grid composite Simpson."""
    x = np.linspace(0.0, 1.0, 2 * panels + 1)
    vals = np.asarray([f(float(v)) for v in x]) * np.exp(-2j * np.pi * h * x)
    w = np.ones(2 * panels + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return complex(np.sum(w * vals) / (6.0 * panels))
