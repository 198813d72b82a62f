"""Worst-case errors of lattice rules on weighted Korobov classes.

Two independent routes compute e(Q_p^z), the worst-case error over the unit
ball, whose square equals the dual-lattice sum

    e^2 = sum_{h != 0, h.z = 0 (mod p)} 1 / r(h)^2.

Kernel route (exact, integer alpha, product weights)
    e^2 = -1 + (1/p) * sum_{k=0}^{p-1} prod_j (1 + gamma_j^2 * w_a({k z_j / p}))
    with w_a(x) = (-1)^{a+1} (2 pi)^{2a} B_{2a}(x) / (2a)!  the Fourier series
    of |h|^{-2a}, B_{2a} the Bernoulli polynomial with exact rational
    coefficients (hardcoded for a = 1..5).

Brute-force route (any alpha > 1/2, truncated)
    the dual sum restricted to max_j |h_j| <= H, computed exactly by grouping
    frequencies by the residue of h_j * z_j mod p (per-coordinate residue
    tables folded by cyclic convolution, an algebraic regrouping of the
    plain enumeration, with no character/Bernoulli machinery involved).
    A conservative tail bound for the discarded frequencies is reported so
    callers can bound the truncation defect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import DomainError, SizeError
from .korobov import (GeneralWeights, KorobovParams, ProductWeights,
                      WeightScheme, zeta, zeta_tail_upper)
from .lattice import LatticeRule, node_residues
from .summation import compensated_sum

__all__ = [
    "wce_kernel",
    "wce_bruteforce",
    "WceBruteForceResult",
    "median_wce_bound",
    "bernoulli_even",
]

# Bernoulli polynomials B_2 .. B_10, exact rational coefficients, descending powers.
_BERNOULLI_COEFFS = {
    1: (1.0, -1.0, 1.0 / 6.0),
    2: (1.0, -2.0, 1.0, 0.0, -1.0 / 30.0),
    3: (1.0, -3.0, 5.0 / 2.0, 0.0, -1.0 / 2.0, 0.0, 1.0 / 42.0),
    4: (1.0, -4.0, 14.0 / 3.0, 0.0, -7.0 / 3.0, 0.0, 2.0 / 3.0, 0.0, -1.0 / 30.0),
    5: (1.0, -5.0, 15.0 / 2.0, 0.0, -7.0, 0.0, 5.0, 0.0, -3.0 / 2.0, 0.0, 5.0 / 66.0),
}

_ENUM_BUDGET = 10 ** 8
_NEG_CLAMP = -1e-12


def bernoulli_even(alpha: int, x: np.ndarray) -> np.ndarray:
    """B_{2*alpha}(x) by Horner on the exact coefficient table (alpha in 1..5)."""
    coeffs = _BERNOULLI_COEFFS[alpha]
    out = np.full_like(np.asarray(x, dtype=np.float64), coeffs[0])
    for c in coeffs[1:]:
        out = out * x + c
    return out


def _omega(alpha: int, x: np.ndarray) -> np.ndarray:
    """w_a(x) = sum_{h != 0} e^{2 pi i h x} / |h|^{2a}  (real, via B_{2a})."""
    scale = (-1.0) ** (alpha + 1) * (2.0 * math.pi) ** (2 * alpha) / math.factorial(2 * alpha)
    return scale * bernoulli_even(alpha, x)


def _product_gammas(weights, d: int) -> tuple[float, ...]:
    if isinstance(weights, ProductWeights):
        gammas = weights.gammas
    else:
        gammas = tuple(float(g) for g in weights)
        ProductWeights(gammas)  # validates range
    if len(gammas) != d:
        raise DomainError(f"need {d} product weights, got {len(gammas)}")
    return gammas


def wce_kernel(rule: LatticeRule, alpha: int, product_gammas) -> float:
    """Exact worst-case error via the kernel trace (integer alpha, product weights)."""
    if int(alpha) != alpha or not 1 <= int(alpha) <= 5:
        raise DomainError(
            f"kernel route supports integer alpha in 1..5, got {alpha}; "
            "use wce_bruteforce for other smoothness")
    alpha = int(alpha)
    gammas = _product_gammas(product_gammas, rule.dim)
    g2 = np.asarray(gammas, dtype=np.float64) ** 2
    terms: list[np.ndarray] = []
    chunk = 1 << 16
    for k_lo in range(0, rule.p, chunk):
        k_hi = min(k_lo + chunk, rule.p)
        x = node_residues(rule, k_lo, k_hi) / float(rule.p)
        terms.append(np.prod(1.0 + g2[None, :] * _omega(alpha, x), axis=1))
    trace = compensated_sum(np.concatenate(terms)) / rule.p
    e2 = trace - 1.0
    if e2 < 0.0:
        if e2 < _NEG_CLAMP:
            raise ArithmeticError(f"kernel trace produced e^2 = {e2} < clamp threshold")
        e2 = 0.0
    return math.sqrt(e2)


@dataclass(frozen=True)
class WceBruteForceResult:
    """Truncated dual-sum error plus a bound on what truncation can hide.

    ``value`` underestimates the exact error; the exact error is at most
    sqrt(value^2 + tail), so ``truncation_bound`` = sqrt(value^2 + tail) - value
    bounds the defect on the error scale.
    """

    value: float
    tail_squared: float

    @property
    def truncation_bound(self) -> float:
        return math.sqrt(self.value ** 2 + self.tail_squared) - self.value


def _residue_table(z_j: int, p: int, h_range: np.ndarray, weights_1d: np.ndarray) -> np.ndarray:
    """T[r] = sum of weights over h in the range with (h * z_j) mod p == r."""
    residues = (h_range * z_j) % p
    return np.bincount(residues, weights=weights_1d, minlength=p)


def _cyclic_fold(u: np.ndarray, w: np.ndarray, p: int) -> np.ndarray:
    idx = (np.arange(p)[None, :] - np.arange(p)[:, None]) % p
    return u @ w[idx]


def wce_bruteforce(rule: LatticeRule, params: KorobovParams, h_bound: int) -> WceBruteForceResult:
    """Truncated dual-lattice worst-case error over max_j |h_j| <= h_bound.

    Exact for the frequencies inside the box; the reported tail bound covers
    every dual frequency outside it (it covers every frequency outside it,
    dual or not, so it is conservative).
    """
    if params.d != rule.dim:
        raise DomainError(f"params dimension {params.d} != rule dimension {rule.dim}")
    if h_bound < rule.p:
        raise DomainError(f"need h_bound >= p = {rule.p}, got {h_bound}")
    if (2 * h_bound + 1) ** params.d > _ENUM_BUDGET:
        raise SizeError(
            f"(2*{h_bound}+1)^{params.d} exceeds the {_ENUM_BUDGET:.0e} enumeration budget")
    p, d = rule.p, params.d
    two_alpha = 2.0 * params.alpha
    h_range = np.arange(-h_bound, h_bound + 1, dtype=np.int64)
    absh = np.abs(h_range).astype(np.float64)
    decay = np.zeros_like(absh)
    nz = absh > 0
    decay[nz] = absh[nz] ** (-two_alpha)

    if isinstance(params.weights, ProductWeights):
        gammas = params.weights.gammas
        folded = None
        for j in range(d):
            w1d = gammas[j] ** 2 * decay
            w1d[h_bound] = 1.0  # h_j = 0 contributes the empty factor
            table = _residue_table(rule.z[j], p, h_range, w1d)
            folded = table if folded is None else _cyclic_fold(folded, table, p)
        e2 = float(folded[0]) - 1.0  # remove the h = 0 term
        tail2 = _tail_squared_product(gammas, two_alpha, h_bound)
    elif isinstance(params.weights, GeneralWeights):
        full = 2.0 * zeta(two_alpha)
        tail_1d = 2.0 * zeta_tail_upper(two_alpha, h_bound)
        e2 = 0.0
        tail2 = 0.0
        for subset, gamma_u in params.weights.by_subset.items():
            folded = None
            for j in sorted(subset):
                table = _residue_table(rule.z[j - 1], p, h_range, decay)
                folded = table if folded is None else _cyclic_fold(folded, table, p)
            e2 += gamma_u ** 2 * float(folded[0])
            tail2 += gamma_u ** 2 * len(subset) * tail_1d * full ** (len(subset) - 1)
    else:
        raise DomainError(f"unsupported weight scheme {type(params.weights)!r}")

    if e2 < 0.0:
        e2 = max(e2, 0.0)
    return WceBruteForceResult(value=math.sqrt(e2), tail_squared=tail2)


def _tail_squared_product(gammas: Sequence[float], two_alpha: float, h_bound: int) -> float:
    """sum_j (2 gamma_j^2 tail) * prod_{i != j} (1 + 2 gamma_i^2 zeta(2a)).

    Union bound over which coordinate escapes the box; every escaped frequency
    is counted at least once, so this dominates the true squared tail.
    """
    full = [1.0 + 2.0 * g ** 2 * zeta(two_alpha) for g in gammas]
    tail_1d = 2.0 * zeta_tail_upper(two_alpha, h_bound)
    total = 0.0
    for j, g in enumerate(gammas):
        prod_rest = 1.0
        for i, s in enumerate(full):
            if i != j:
                prod_rest *= s
        total += g ** 2 * tail_1d * prod_rest
    return total


RuleError = Union[float, WceBruteForceResult]


def median_wce_bound(rules: Sequence[LatticeRule], alpha: float, weights: WeightScheme,
                     h_bound: int | None = None) -> float:
    """sqrt(2) times the median of the per-rule worst-case errors.

    This upper-bounds the worst-case error of the realized median rule built
    from these replicates: the median estimate can deviate by at most sqrt(2)
    times the median of the componentwise deviations.
    """
    if not rules or len(rules) % 2 == 0:
        raise DomainError(f"need an odd number of rules, got {len(rules)}")
    use_kernel = (
        float(alpha).is_integer() and 1 <= int(alpha) <= 5
        and isinstance(weights, ProductWeights)
    )
    errors: list[float] = []
    for rule in rules:
        if use_kernel:
            errors.append(wce_kernel(rule, int(alpha), weights))
        else:
            params = KorobovParams(alpha=alpha, weights=weights, d=rule.dim)
            h_eff = h_bound if h_bound is not None else max(rule.p, 1000)
            errors.append(wce_bruteforce(rule, params, h_eff).value)
    errors.sort()
    return math.sqrt(2.0) * errors[len(errors) // 2]
