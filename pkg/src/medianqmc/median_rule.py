"""The universal median lattice rule.

For a budget parameter n, draw N = 2*ceil(h(n)*log2(n)) + 1 independent
rules (each a uniform prime p_k from the pool [ceil(n/2)+1, n] and a uniform
generating vector z_k in {1:p_k-1}^d), evaluate every Q_{p_k}^{z_k}(f), and
return the componentwise (real/imaginary) median of the N estimates.  The
slowly growing replicate function h makes the failure probability decay
like n^{-h(n)} while the total budget stays below a constant times
n * log(n) * h(n) function values.

No parameter of the algorithm depends on the smoothness or weights of the
integrand: universality is the point.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ContractViolation, DomainError, EvaluationError
from .lattice import Integrand, LatticeRule, apply_rule
from .primes import SeededRng, primes_in_range, sample_generator, sample_prime

__all__ = [
    "HChoice",
    "MedianRuleConfig",
    "ReplicateResult",
    "MedianRunTrace",
    "replicate_count",
    "complex_median",
    "run_median_rule",
    "integrate_median",
    "integrate_median_tent",
    "tent",
    "tent_transform",
]


@dataclass(frozen=True)
class HChoice:
    """Replicate-growth function h: N -> [1, inf).

    ``loglog`` is max(1, ln ln n), the experiments' default; ``log`` is
    max(1, ln n); ``const`` is a constant c >= 1.  Logarithms are natural
    except in the replicate-count formula itself, which is explicitly base 2.
    """

    kind: str
    c: float = 1.0
    fn: Optional[Callable[[int], float]] = field(default=None, compare=False)

    @classmethod
    def loglog(cls) -> "HChoice":
        return cls("loglog")

    @classmethod
    def log(cls) -> "HChoice":
        return cls("log")

    @classmethod
    def constant(cls, c: float) -> "HChoice":
        if not c >= 1.0:
            raise DomainError(f"constant h must be >= 1, got {c}")
        return cls("const", c=float(c))

    @classmethod
    def custom(cls, fn: Callable[[int], float], label: str = "custom") -> "HChoice":
        return cls(label, fn=fn)

    @classmethod
    def parse(cls, text: str) -> "HChoice":
        text = text.strip().lower()
        if text == "loglog":
            return cls.loglog()
        if text == "log":
            return cls.log()
        if text.startswith("const:"):
            return cls.constant(float(text[6:]))
        raise DomainError(f"unknown h choice {text!r} (use loglog | log | const:<c>)")

    def value(self, n: int) -> float:
        if self.kind == "loglog":
            return max(1.0, math.log(math.log(n)))
        if self.kind == "log":
            return max(1.0, math.log(n))
        if self.kind == "const":
            return self.c
        if self.fn is None:
            raise DomainError(f"h choice {self.kind!r} has no function attached")
        h = float(self.fn(n))
        if not h >= 1.0:
            raise DomainError(f"custom h(n) must be >= 1, got {h} at n={n}")
        return h

    def __str__(self) -> str:
        return f"const:{self.c}" if self.kind == "const" else self.kind


@dataclass(frozen=True)
class MedianRuleConfig:
    """Everything that determines one run: n, d, h, and the master seed."""

    n: int
    d: int
    master_seed: int
    h_choice: HChoice = field(default_factory=HChoice.loglog)

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"n must be >= 2, got {self.n}")
        if self.d < 1:
            raise DomainError(f"d must be >= 1, got {self.d}")


@dataclass(frozen=True)
class ReplicateResult:
    p: int
    z: tuple[int, ...]
    estimate: complex


@dataclass(frozen=True)
class MedianRunTrace:
    """Per-replicate rules and estimates, the final median, and the budget used."""

    replicates: tuple[ReplicateResult, ...]
    final: complex
    total_evals: int


def replicate_count(n: int, h_choice: HChoice) -> int:
    """N = 2*ceil(h(n) * log2(n)) + 1; always odd and >= 3."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    return 2 * math.ceil(h_choice.value(n) * math.log2(n)) + 1


def complex_median(values: Sequence[complex]) -> complex:
    """Median of the real parts + i * median of the imaginary parts.

    The inputs must form a nonempty odd-length list, so each componentwise
    median is the middle order statistic, never an average of two candidates.
    """
    vals = [complex(v) for v in values]
    if not vals or len(vals) % 2 == 0:
        raise ContractViolation(
            f"complex_median needs an odd-length nonempty list, got {len(vals)}")
    mid = len(vals) // 2
    re = sorted(v.real for v in vals)[mid]
    im = sorted(v.imag for v in vals)[mid]
    return complex(re, im)


def tent(x):
    """Tent map 1 - |2x - 1|: [0,1] -> [0,1], applied elementwise to arrays."""
    if isinstance(x, np.ndarray):
        return 1.0 - np.abs(2.0 * x - 1.0)
    return 1.0 - abs(2.0 * x - 1.0)


def tent_transform(f: Integrand) -> Integrand:
    """Compose an integrand with the componentwise tent map.

    The tent map is measure preserving in each coordinate, so the transformed
    integrand is one-periodic with the same integral; running the median rule
    on it extends the method to smooth non-periodic integrands.
    """

    def batch(points: np.ndarray) -> np.ndarray:
        return f.fn(1.0 - np.abs(2.0 * points - 1.0))

    return Integrand(dim=f.dim, fn=batch, true_integral=f.true_integral,
                     name=f"tent({f.name})" if f.name else "tent")


def run_median_rule(f: Integrand, n: int, n_replicates: int, master_seed: int,
                    workers: int = 1) -> MedianRunTrace:
    """Median rule with an explicit replicate count.

    Replicate k (1-based) draws its prime and generating vector from the
    dedicated stream (master_seed, k), so replicates may run in any order or
    in parallel without changing the trace.  Draws are with replacement: the
    same rule may legitimately repeat.
    """
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    if n_replicates < 1 or n_replicates % 2 == 0:
        raise ContractViolation(
            f"replicate count must be odd and positive, got {n_replicates}")
    pool = primes_in_range(n)

    def one(k: int) -> ReplicateResult:
        rng = SeededRng(master_seed, k)
        p = sample_prime(pool, rng)
        z = sample_generator(p, f.dim, rng)
        try:
            est = apply_rule(LatticeRule(p, z), f)
        except EvaluationError as err:
            raise EvaluationError(
                f"replicate {k}: {err}", node_index=err.node_index,
                replicate_index=k) from err
        return ReplicateResult(p=p, z=z, estimate=est)

    ks = range(1, n_replicates + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool_exec:
            replicates = tuple(pool_exec.map(one, ks))
    else:
        replicates = tuple(one(k) for k in ks)

    final = complex_median([r.estimate for r in replicates])
    total = sum(r.p for r in replicates)
    return MedianRunTrace(replicates=replicates, final=final, total_evals=total)


def integrate_median(f: Integrand, config: MedianRuleConfig,
                     workers: int = 1) -> MedianRunTrace:
    """Full median rule: N from the replicate-count formula, then the run."""
    if f.dim != config.d:
        raise DomainError(
            f"integrand dimension {f.dim} != configured dimension {config.d}")
    n_rep = replicate_count(config.n, config.h_choice)
    return run_median_rule(f, config.n, n_rep, config.master_seed, workers=workers)


def integrate_median_tent(f: Integrand, config: MedianRuleConfig,
                          workers: int = 1) -> MedianRunTrace:
    """Median rule applied to f composed with the componentwise tent map."""
    return integrate_median(tent_transform(f), config, workers=workers)
