"""Weighted Korobov smoothness/weight parameters and derived error quantities.

The function class is parameterized by a smoothness exponent ``alpha > 1/2``
and coordinate-subset weights ``gamma_u`` in (0, 1].  A frequency vector
``h`` carries the decay weight

    r(h) = gamma_{supp(h)}^{-1} * prod_{j in supp(h)} |h_j|^alpha,

with the empty product equal to 1 and the empty-set weight fixed to 1, so
``r(0) = 1``.  The tractability-governing weight sum is

    V_d(alpha, gamma) = sum_{h != 0} 1/r(h)
                      = sum_{u != {}} gamma_u * (2*zeta(alpha))^{|u|},

which for product weights collapses to ``-1 + prod_j (1 + 2*gamma_j*zeta(alpha))``.

This module also provides the fully explicit deterministic error bound for
the median rule (minimized over the Hoelder parameter ``lambda``), and the
matching per-prime bound satisfied by an abundant share of generating vectors.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import DomainError, SizeError, WeightError

__all__ = [
    "ProductWeights",
    "GeneralWeights",
    "WeightScheme",
    "KorobovParams",
    "TrigPolynomial",
    "zeta",
    "zeta_tail_upper",
    "r_weight",
    "v_d",
    "m_d_bound",
    "det_error_bound",
    "random_vector_error_bound",
    "product_to_general",
    "parse_weights",
]


# ---------------------------------------------------------------------------
# weight schemes


@dataclass(frozen=True)
class ProductWeights:
    """Per-coordinate weights gamma_j in (0, 1]; gamma_u = prod_{j in u} gamma_j."""

    gammas: tuple[float, ...]

    def __post_init__(self):
        gammas = tuple(float(g) for g in self.gammas)
        if not gammas:
            raise WeightError("product weights need at least one coordinate")
        for g in gammas:
            if not (0.0 < g <= 1.0):
                raise WeightError(f"weights must lie in (0, 1], got {g}")
        object.__setattr__(self, "gammas", gammas)

    @property
    def d(self) -> int:
        return len(self.gammas)

    def subset_weight(self, subset: Iterable[int]) -> float:
        """gamma_u for a set of 1-based coordinate indices (empty set -> 1)."""
        w = 1.0
        for j in subset:
            w *= self.gammas[j - 1]
        return w

    def powered(self, exponent: float) -> "ProductWeights":
        return ProductWeights(tuple(g ** exponent for g in self.gammas))


@dataclass(frozen=True, eq=False)
class GeneralWeights:
    """Sparse map from nonempty 1-based coordinate subsets to gamma_u in (0, 1].

    Subsets absent from the map are an error when queried, never an implicit
    zero: weights must be positive, and the sparse map is the caller's
    declaration of every subset intended to carry weight.
    """

    by_subset: Mapping[frozenset, float]

    def __post_init__(self):
        norm: dict[frozenset, float] = {}
        for key, val in dict(self.by_subset).items():
            subset = frozenset(int(j) for j in key)
            if not subset:
                raise WeightError("general weights are keyed by nonempty subsets")
            if min(subset) < 1:
                raise WeightError("coordinate indices are 1-based")
            val = float(val)
            if not (0.0 < val <= 1.0):
                raise WeightError(f"weights must lie in (0, 1], got {val}")
            norm[subset] = val
        if not norm:
            raise WeightError("general weight map is empty")
        object.__setattr__(self, "by_subset", norm)

    @property
    def max_coordinate(self) -> int:
        return max(max(u) for u in self.by_subset)

    def subset_weight(self, subset: Iterable[int]) -> float:
        key = frozenset(int(j) for j in subset)
        if not key:
            return 1.0
        try:
            return self.by_subset[key]
        except KeyError:
            raise WeightError(
                f"no weight stored for coordinate subset {sorted(key)}"
            ) from None

    def powered(self, exponent: float) -> "GeneralWeights":
        return GeneralWeights({u: g ** exponent for u, g in self.by_subset.items()})


WeightScheme = Union[ProductWeights, GeneralWeights]


def product_to_general(weights: ProductWeights) -> GeneralWeights:
    """Materialize all 2^d - 1 induced subset weights of a product scheme."""
    d = weights.d
    if d > 25:
        raise SizeError(f"refusing to materialize 2^{d} subsets (d > 25)")
    out: dict[frozenset, float] = {}
    for bits in range(1, 1 << d):
        subset = frozenset(j + 1 for j in range(d) if bits >> j & 1)
        out[subset] = weights.subset_weight(subset)
    return GeneralWeights(out)


@dataclass(frozen=True)
class KorobovParams:
    """Smoothness alpha > 1/2, a weight scheme, and the ambient dimension."""

    alpha: float
    weights: WeightScheme
    d: int

    def __post_init__(self):
        if not self.alpha > 0.5:
            raise DomainError(f"alpha must exceed 1/2, got {self.alpha}")
        if self.d < 1:
            raise DomainError(f"dimension must be >= 1, got {self.d}")
        if isinstance(self.weights, ProductWeights):
            if self.weights.d != self.d:
                raise WeightError(
                    f"product weights have length {self.weights.d}, dimension is {self.d}"
                )
        elif isinstance(self.weights, GeneralWeights):
            if self.weights.max_coordinate > self.d:
                raise WeightError("general weight subsets exceed the dimension")
        else:
            raise WeightError(f"unsupported weight scheme {type(self.weights)!r}")


# ---------------------------------------------------------------------------
# special functions

_ZETA_CUTOFF = 100
# (B_{2j} / (2j)!, 2j - 1) for j = 1..4: Euler-Maclaurin correction terms.
_ZETA_EM_TERMS = (
    (1.0 / 12.0, 1),
    (-1.0 / 720.0, 3),
    (1.0 / 30240.0, 5),
    (-1.0 / 1209600.0, 7),
)


def zeta(alpha: float) -> float:
    """Riemann zeta on (1, inf) by partial sum plus Euler-Maclaurin tail.

    Partial sum to k = 99, then
    N^{1-s}/(s-1) + N^{-s}/2 + sum_j B_{2j}/(2j)! * (s)_{2j-1} * N^{-s-2j+1}
    with N = 100.  The first dropped term is below 1e-20 uniformly in s > 1,
    comfortably inside the 1e-12 absolute-accuracy contract.
    """
    s = float(alpha)
    if not s > 1.0:
        raise DomainError(f"zeta series diverges for alpha <= 1, got {alpha}")
    partial = math.fsum(k ** -s for k in range(1, _ZETA_CUTOFF))
    n = float(_ZETA_CUTOFF)
    tail = n ** (1.0 - s) / (s - 1.0) + 0.5 * n ** -s
    for coeff, m in _ZETA_EM_TERMS:
        rising = 1.0
        for i in range(m):
            rising *= s + i
        tail += coeff * rising * n ** (-s - m)
    return partial + tail


def zeta_tail_upper(s: float, cutoff: int) -> float:
    """Upper bound on sum_{k > cutoff} k^{-s}: the integral tail cutoff^{1-s}/(s-1)."""
    if not s > 1.0:
        raise DomainError(f"tail bound needs s > 1, got {s}")
    if cutoff < 1:
        raise DomainError("cutoff must be >= 1")
    return float(cutoff) ** (1.0 - s) / (s - 1.0)


# ---------------------------------------------------------------------------
# decay weight and weight sums


def r_weight(h: Sequence[int], params: KorobovParams) -> float:
    """Fourier decay weight r(h) = gamma_supp^{-1} * prod_{j in supp} |h_j|^alpha."""
    if len(h) != params.d:
        raise DomainError(f"frequency vector has length {len(h)}, expected {params.d}")
    supp = [j + 1 for j, hj in enumerate(h) if int(hj) != 0]
    if not supp:
        return 1.0
    prod = 1.0
    for j in supp:
        prod *= abs(float(h[j - 1])) ** params.alpha
    return prod / params.weights.subset_weight(supp)


def v_d(alpha: float, weights: WeightScheme, d: int) -> float:
    """Weight sum V_d = sum over nonzero frequencies of 1/r(h).

    Product weights use the closed form -1 + prod_j (1 + 2*gamma_j*zeta(alpha));
    general weights sum gamma_u * (2*zeta(alpha))^{|u|} over the stored subsets.
    """
    z2 = 2.0 * zeta(alpha)
    if isinstance(weights, ProductWeights):
        if weights.d != d:
            raise WeightError("product weight length does not match d")
        return math.expm1(math.fsum(math.log1p(g * z2) for g in weights.gammas))
    if isinstance(weights, GeneralWeights):
        if weights.max_coordinate > d:
            raise WeightError("general weight subsets exceed the dimension")
        return math.fsum(g * z2 ** len(u) for u, g in weights.by_subset.items())
    raise WeightError(f"unsupported weight scheme {type(weights)!r}")


def _log_v_d(alpha: float, weights: WeightScheme, d: int) -> float:
    """log V_d, stable against overflow of the product closed form."""
    z2 = 2.0 * zeta(alpha)
    if isinstance(weights, ProductWeights):
        s = math.fsum(math.log1p(g * z2) for g in weights.gammas)
        if s > 33.0:
            return s + math.log1p(-math.exp(-s))
        return math.log(math.expm1(s))
    terms = [math.log(g) + len(u) * math.log(z2) for u, g in weights.by_subset.items()]
    top = max(terms)
    return top + math.log(math.fsum(math.exp(t - top) for t in terms))


def m_d_bound(alpha: float, product_gammas: Sequence[float], lam: float) -> float:
    """Dimension-robust upper bound on V_d(alpha/lam, gamma^{1/lam}) for product weights:

        exp( 2 * zeta(alpha/lam) * (sum_j gamma_j^{1/alpha})^{alpha/lam} ).
    """
    gammas = product_gammas.gammas if isinstance(product_gammas, ProductWeights) \
        else tuple(float(g) for g in product_gammas)
    if not (0.5 <= lam < alpha):
        raise DomainError(f"lambda must lie in [1/2, alpha), got {lam} with alpha={alpha}")
    for g in gammas:
        if not (0.0 < g <= 1.0):
            raise WeightError(f"weights must lie in (0, 1], got {g}")
    ssum = math.fsum(g ** (1.0 / alpha) for g in gammas)
    return math.exp(2.0 * zeta(alpha / lam) * ssum ** (alpha / lam))


# ---------------------------------------------------------------------------
# explicit error bounds, minimized over lambda


def _minimize_lambda(log_objective: Callable[[float], float],
                     alpha: float) -> tuple[float, float]:
    """Grid-first bracketing (256 samples) + golden-section refinement.

    The objective is continuous on [1/2, alpha) and blows up as lambda -> alpha,
    but unimodality is not guaranteed, so the dense grid picks the basin before
    the local search runs.  Returns (lambda_star, log value).
    """
    lo = 0.5
    hi = alpha - min(1e-6, (alpha - 0.5) / 4.0)
    if hi <= lo:
        hi = lo + (alpha - lo) / 2.0
    grid = [lo + (hi - lo) * i / 255.0 for i in range(256)]
    vals = [log_objective(x) for x in grid]
    i_best = min(range(256), key=vals.__getitem__)
    a = grid[max(0, i_best - 1)]
    b = grid[min(255, i_best + 1)]

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d_ = a + invphi * (b - a)
    fc, fd = log_objective(c), log_objective(d_)
    while (b - a) > 1e-9 * max(1.0, abs(b)):
        if fc < fd:
            b, d_, fd = d_, c, fc
            c = b - invphi * (b - a)
            fc = log_objective(c)
        else:
            a, c, fc = c, d_, fd
            d_ = a + invphi * (b - a)
            fd = log_objective(d_)
    lam = 0.5 * (a + b)
    flam = log_objective(lam)
    if vals[i_best] < flam:
        return grid[i_best], vals[i_best]
    return lam, flam


def _bound_over_lambda(log_prefactor: float, params: KorobovParams) -> tuple[float, float]:
    def log_obj(lam: float) -> float:
        w = params.weights.powered(1.0 / lam)
        return lam * (log_prefactor + _log_v_d(params.alpha / lam, w, params.d))

    lam_star, log_val = _minimize_lambda(log_obj, params.alpha)
    return math.exp(log_val), lam_star


def det_error_bound(n: int, params: KorobovParams, tau: float) -> tuple[float, float]:
    """Explicit worst-case-error bound for the realized median rule:

        inf_{1/2 <= lambda < alpha} ( 4*sqrt(2) / ((1-tau)*n)
                                      * V_d(alpha/lambda, gamma^{1/lambda}) )^lambda,

    which holds with probability at least 1 - (1/2)(4 tau (1-tau))^{N/2} over
    the rule draws.  Returns (bound, minimizing lambda).
    """
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if not (0.5 < tau < 1.0):
        raise DomainError(f"tau must lie in (1/2, 1), got {tau}")
    log_pref = math.log(4.0 * math.sqrt(2.0)) - math.log((1.0 - tau) * n)
    return _bound_over_lambda(log_pref, params)


def random_vector_error_bound(p: int, params: KorobovParams, tau: float) -> tuple[float, float]:
    """Worst-case-error level not exceeded by at least a tau-fraction of all
    generating vectors z in {1..p-1}^d:

        inf_{1/2 <= lambda < alpha} ( 2 / ((1-tau)*(p-1))
                                      * V_d(alpha/lambda, gamma^{1/lambda}) )^lambda.

    Returns (bound, minimizing lambda).
    """
    if p < 2:
        raise DomainError(f"p must be >= 2, got {p}")
    if not (0.0 < tau < 1.0):
        raise DomainError(f"tau must lie in (0, 1), got {tau}")
    log_pref = math.log(2.0) - math.log((1.0 - tau) * (p - 1))
    return _bound_over_lambda(log_pref, params)


# ---------------------------------------------------------------------------
# finite trigonometric polynomials (exact-norm test integrands)


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    """Finite Fourier sum f(x) = sum_h c_h exp(2 pi i h.x) with exact norm.

    The squared Korobov norm is sum_h r(h)^2 |c_h|^2, computable exactly from
    the stored terms (and invariant under their storage order, since the sum
    is accumulated exactly).
    """

    terms: Mapping[tuple, complex]

    def __post_init__(self):
        norm: dict[tuple[int, ...], complex] = {}
        dim = None
        for key, val in dict(self.terms).items():
            h = tuple(int(x) for x in key)
            if dim is None:
                dim = len(h)
            elif len(h) != dim:
                raise DomainError("all frequency vectors must share one dimension")
            norm[h] = complex(val)
        if not norm:
            raise DomainError("a trigonometric polynomial needs at least one term")
        object.__setattr__(self, "terms", norm)

    @property
    def dim(self) -> int:
        return len(next(iter(self.terms)))

    def true_integral(self) -> complex:
        return self.terms.get((0,) * self.dim, 0.0 + 0.0j)

    def norm(self, params: KorobovParams) -> float:
        sq = math.fsum(r_weight(h, params) ** 2 * abs(c) ** 2
                       for h, c in self.terms.items())
        return math.sqrt(sq)


# ---------------------------------------------------------------------------
# weight-scheme parsing (config files / CLI)

_RULE_RE = re.compile(r"^j\s*(?:\^|\*\*)\s*(-[0-9.]+)$")


def parse_weights(spec, d: int) -> WeightScheme:
    """Parse a weight scheme from config-file / CLI shapes.

    Accepted: an existing scheme; a list of d numbers (product); the string
    forms "const:<c>", "g1,g2,..." and the rule "j^-<beta>" (product weights
    gamma_j = j^-beta); or a mapping with one of the keys "product" (array or
    rule string) / "general" (list of [subset, value] pairs).
    """
    if isinstance(spec, (ProductWeights, GeneralWeights)):
        return spec
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("const:"):
            return ProductWeights((float(text[6:]),) * d)
        m = _RULE_RE.match(text)
        if m:
            beta = -float(m.group(1))
            return ProductWeights(tuple(float(j) ** -beta for j in range(1, d + 1)))
        parts = [p for p in text.split(",") if p.strip()]
        gammas = tuple(float(p) for p in parts)
        if len(gammas) != d:
            raise WeightError(f"expected {d} product weights, got {len(gammas)}")
        return ProductWeights(gammas)
    if isinstance(spec, Mapping):
        if "product" in spec:
            return parse_weights(spec["product"], d)
        if "general" in spec:
            pairs = spec["general"]
            return GeneralWeights({frozenset(int(j) for j in u): float(g)
                                   for u, g in pairs})
        raise WeightError("weight mapping needs a 'product' or 'general' key")
    if isinstance(spec, Sequence):
        gammas = tuple(float(g) for g in spec)
        if len(gammas) != d:
            raise WeightError(f"expected {d} product weights, got {len(gammas)}")
        return ProductWeights(gammas)
    raise WeightError(f"cannot parse weight scheme from {spec!r}")
