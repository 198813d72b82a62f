"""Product-form test integrands with true integral exactly 1.

Four families, each a product over coordinates of 1 + (mean-zero factor)/j^c:

* ``f1``  : factor |4x-2| - 1 (piecewise linear, Fourier decay ~ |h|^-2)
* ``f2``  : factor (x-1/2)^2 sin(2 pi x - pi) (decay ~ |h|^-3)
* ``fac`` : factor g_a(x) - mean(g_a) with g_a(x) = |x-1/2|^a * exp(1/((2x-1)^2-1));
             smoothness is tunable through a, the centering constant comes from
             high-accuracy quadrature of g_a
* ``nonper``: a non-periodic degree-7 polynomial-plus-sine factor scaled by
             theta^j/8; meant to be integrated through the tent transform

Every univariate factor integrates to exactly 1 over [0,1], so the true
integral is 1 in every dimension (fac: up to the quadrature tolerance of the
centering constant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .errors import DomainError
from .lattice import Integrand
from .quadrature import adaptive_simpson, graded_breakpoints

__all__ = [
    "TestFunctionSpec",
    "g_a_eval",
    "g_a_values",
    "g_a_mean",
    "make_integrand",
    "factor_mean_check",
    "factor_function",
]

_KINDS = ("f1", "f2", "fac", "nonper")

# 31 - 84x^2 + 8x^3 + 70x^4 - 28x^6 + 8x^7 - 16 cos(1), descending powers.
_NONPER_POLY = (8.0, -28.0, 0.0, 70.0, 8.0, -84.0, 0.0, 31.0 - 16.0 * math.cos(1.0))


@dataclass(frozen=True)
class TestFunctionSpec:
    """Which family, its parameters, and the dimension.

    For ``nonper`` the tractability-relevant regime is |theta| < 1; that is
    documented, not enforced, so experiments can probe the boundary.
    """

    kind: str
    d: int
    c1: Optional[float] = None
    c2: Optional[float] = None
    a: Optional[float] = None
    c: Optional[float] = None
    theta: Optional[float] = None

    __test__ = False  # keep pytest from collecting this as a test class

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown test function {self.kind!r}, expected {_KINDS}")
        if self.d < 1:
            raise DomainError(f"dimension must be >= 1, got {self.d}")
        if self.kind == "f1":
            if self.c1 is None or not self.c1 > 0:
                raise DomainError("f1 needs c1 > 0")
        elif self.kind == "f2":
            if self.c2 is None or not self.c2 > 0:
                raise DomainError("f2 needs c2 > 0")
        elif self.kind == "fac":
            if self.a is None or not self.a > 0:
                raise DomainError("fac needs a > 0")
            if self.c is None or not self.c > self.a + 1:
                raise DomainError("fac needs c > a + 1")
        elif self.theta is None:
            raise DomainError("nonper needs theta")

    @classmethod
    def f1(cls, d: int, c1: float) -> "TestFunctionSpec":
        return cls(kind="f1", d=d, c1=float(c1))

    @classmethod
    def f2(cls, d: int, c2: float) -> "TestFunctionSpec":
        return cls(kind="f2", d=d, c2=float(c2))

    @classmethod
    def fac(cls, d: int, a: float, c: float) -> "TestFunctionSpec":
        return cls(kind="fac", d=d, a=float(a), c=float(c))

    @classmethod
    def nonperiodic(cls, d: int, theta: float) -> "TestFunctionSpec":
        return cls(kind="nonper", d=d, theta=float(theta))

    def label(self) -> str:
        if self.kind == "f1":
            return f"f1(c1={self.c1},d={self.d})"
        if self.kind == "f2":
            return f"f2(c2={self.c2},d={self.d})"
        if self.kind == "fac":
            return f"fac(a={self.a},c={self.c},d={self.d})"
        return f"nonper(theta={self.theta},d={self.d})"


# ---------------------------------------------------------------------------
# the g_a building block


def g_a_values(a: float, x: np.ndarray) -> np.ndarray:
    """Vectorized g_a(x) = |x-1/2|^a * exp(1/((2x-1)^2 - 1)) on [0,1].

    The bump factor's continuous limit at the endpoints is 0, so x = 0 and
    x = 1 (where the exponent formally divides by zero) return exactly 0.
    """
    x = np.asarray(x, dtype=np.float64)
    u = np.abs(x - 0.5)
    if a == 0.5:
        amp = np.sqrt(u)
    elif a == 1.0:
        amp = u
    elif a == 2.0:
        amp = u * u
    else:
        amp = u ** a
    t = (2.0 * x - 1.0) ** 2 - 1.0
    out = np.zeros_like(x)
    interior = t < 0.0
    out[interior] = amp[interior] * np.exp(1.0 / t[interior])
    return out


def g_a_eval(a: float, x: float) -> float:
    """Scalar g_a(x); a > 0, x in [0, 1]."""
    if not a > 0:
        raise DomainError(f"need a > 0, got {a}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    return _g_scalar(a, x)


def _g_scalar(a: float, x: float) -> float:
    t = (2.0 * x - 1.0) ** 2 - 1.0
    if t >= 0.0:
        return 0.0
    return abs(x - 0.5) ** a * math.exp(1.0 / t)


def _kink_levels(a: float, tol: float) -> int:
    # contribution of [1/2, 1/2+h] is below ~0.37 h^{a+1}; grade until ~tol/10
    h_min = (0.1 * tol) ** (1.0 / (a + 1.0))
    if h_min >= 0.25:
        return 2
    return min(48, int(math.ceil(math.log2(0.5 / h_min))))


@lru_cache(maxsize=None)
def g_a_mean(a: float, tol: float = 1e-14) -> float:
    """Integral of g_a over [0,1] to absolute accuracy ``tol``.

    g_a is symmetric about 1/2, so this is 2 times the integral over [1/2, 1],
    computed by adaptive Simpson on a partition graded dyadically into the
    kink at 1/2 and (mildly) into the flat endpoint at 1.
    """
    if not a > 0:
        raise DomainError(f"need a > 0, got {a}")
    if not tol >= 1e-14:
        raise DomainError(f"tolerance below 1e-14 is not supported, got {tol}")
    seeds = sorted(set(
        graded_breakpoints(0.5, 1.0, toward=0.5, levels=_kink_levels(a, tol))
        + graded_breakpoints(0.5, 1.0, toward=1.0, levels=8)))
    half = adaptive_simpson(lambda x: _g_scalar(a, x), 0.5, 1.0, tol / 2.0, seeds=seeds)
    return 2.0 * half


# ---------------------------------------------------------------------------
# integrand construction


def _inverse_powers(d: int, c: float) -> np.ndarray:
    return np.arange(1, d + 1, dtype=np.float64) ** (-c)


def make_integrand(spec: TestFunctionSpec) -> Integrand:
    """Build the product-form integrand; evaluation is O(d) per point."""
    d = spec.d
    if spec.kind == "f1":
        scale = _inverse_powers(d, spec.c1)

        def batch(points: np.ndarray) -> np.ndarray:
            return np.prod(1.0 + (np.abs(4.0 * points - 2.0) - 1.0) * scale, axis=1)

    elif spec.kind == "f2":
        scale = _inverse_powers(d, spec.c2)

        def batch(points: np.ndarray) -> np.ndarray:
            osc = (points - 0.5) ** 2 * np.sin(2.0 * np.pi * points - np.pi)
            return np.prod(1.0 + osc * scale, axis=1)

    elif spec.kind == "fac":
        scale = _inverse_powers(d, spec.c)
        center = g_a_mean(spec.a)
        a = spec.a

        def batch(points: np.ndarray) -> np.ndarray:
            return np.prod(1.0 + (g_a_values(a, points) - center) * scale, axis=1)

    else:
        theta = spec.theta
        scale = np.array([theta ** j / 8.0 for j in range(1, d + 1)])

        def batch(points: np.ndarray) -> np.ndarray:
            poly = np.polyval(_NONPER_POLY, points) - 16.0 * np.sin(points)
            return np.prod(1.0 + poly * scale, axis=1)

    return Integrand(dim=d, fn=batch, true_integral=1.0 + 0.0j, name=spec.label())


def factor_function(spec: TestFunctionSpec, j: int) -> Callable[[float], float]:
    """Scalar univariate factor for coordinate j (1-based)."""
    if not 1 <= j <= spec.d:
        raise DomainError(f"coordinate {j} outside 1..{spec.d}")
    if spec.kind == "f1":
        s = float(j) ** (-spec.c1)
        return lambda x: 1.0 + (abs(4.0 * x - 2.0) - 1.0) * s
    if spec.kind == "f2":
        s = float(j) ** (-spec.c2)
        return lambda x: 1.0 + (x - 0.5) ** 2 * math.sin(2.0 * math.pi * x - math.pi) * s
    if spec.kind == "fac":
        s = float(j) ** (-spec.c)
        center = g_a_mean(spec.a)
        a = spec.a
        return lambda x: 1.0 + (_g_scalar(a, x) - center) * s
    th = spec.theta ** j / 8.0

    def nonper_factor(x: float) -> float:
        poly = 0.0
        for coeff in _NONPER_POLY:
            poly = poly * x + coeff
        return 1.0 + (poly - 16.0 * math.sin(x)) * th

    return nonper_factor


def factor_mean_check(spec: TestFunctionSpec, tol: float) -> np.ndarray:
    """|univariate factor mean - 1| per coordinate, by direct quadrature.

    Verification helper for the "true integral is 1" construction; not used
    on any evaluation hot path.
    """
    if spec.kind == "fac":
        levels = _kink_levels(spec.a, tol)
        seeds = sorted(set(
            graded_breakpoints(0.0, 0.5, toward=0.5, levels=levels)
            + graded_breakpoints(0.5, 1.0, toward=0.5, levels=levels)
            + graded_breakpoints(0.0, 0.5, toward=0.0, levels=8)
            + graded_breakpoints(0.5, 1.0, toward=1.0, levels=8)))
    else:
        seeds = [0.0, 0.25, 0.5, 0.75, 1.0]
    defects = []
    for j in range(1, spec.d + 1):
        mean = adaptive_simpson(factor_function(spec, j), 0.0, 1.0, tol, seeds=seeds)
        defects.append(abs(mean - 1.0))
    return np.asarray(defects)
