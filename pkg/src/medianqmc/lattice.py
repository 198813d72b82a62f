"""Rank-1 lattice rules: node generation, application, dual-lattice test.

A rule (p, z) averages an integrand over the p points {k*z/p mod 1},
k = 0..p-1.  Node coordinates come from exact integer residues (k*z_j) mod p
followed by a single float division, never from accumulated float increments,
so node sets are bit-reproducible for any p.  The rule average uses
compensated accumulation, making the estimate independent of evaluation
chunking to well below 1e-14 relative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .errors import DomainError, EvaluationError
from .korobov import TrigPolynomial
from .primes import is_prime
from .summation import compensated_sum

__all__ = [
    "LatticeRule",
    "Integrand",
    "lattice_nodes",
    "node_residues",
    "apply_rule",
    "dual_indicator",
    "trig_integrand",
]

_CHUNK = 1 << 16  # multiple of the 4096 summation block, so chunking is neutral


@dataclass(frozen=True)
class LatticeRule:
    """Prime p and generating vector z with entries in {1, ..., p-1}."""

    p: int
    z: tuple[int, ...]

    def __post_init__(self):
        z = tuple(int(v) for v in self.z)
        object.__setattr__(self, "z", z)
        if not is_prime(self.p):
            raise DomainError(f"p must be prime, got {self.p}")
        if not z:
            raise DomainError("generating vector must be nonempty")
        for v in z:
            if not 1 <= v <= self.p - 1:
                raise DomainError(f"z entries must lie in [1, {self.p - 1}], got {v}")

    @property
    def dim(self) -> int:
        return len(self.z)


@dataclass(frozen=True)
class Integrand:
    """Evaluation contract on [0,1]^d returning complex values.

    ``fn`` maps an (m, d) float array of points to an (m,) array of values
    (real output is accepted and treated as having zero imaginary part).
    ``true_integral`` is the known integral when available.
    """

    dim: int
    fn: Callable[[np.ndarray], np.ndarray]
    true_integral: Optional[complex] = None
    name: str = ""

    def __call__(self, x: Sequence[float]) -> complex:
        pts = np.asarray(x, dtype=np.float64).reshape(1, self.dim)
        return complex(np.asarray(self.fn(pts)).ravel()[0])

    @classmethod
    def from_scalar(cls, dim: int, f: Callable, true_integral=None, name: str = "") -> "Integrand":
        """Wrap a pointwise function (slow path, handy for tests and lambdas)."""

        def batch(points: np.ndarray) -> np.ndarray:
            return np.array([complex(f(pt)) for pt in points])

        return cls(dim=dim, fn=batch, true_integral=true_integral, name=name)


def node_residues(rule: LatticeRule, k_lo: int = 0, k_hi: int | None = None) -> np.ndarray:
    """Integer residues (k*z_j) mod p for k in [k_lo, k_hi), shape (k_hi-k_lo, d)."""
    if k_hi is None:
        k_hi = rule.p
    k = np.arange(k_lo, k_hi, dtype=np.int64)
    z = np.asarray(rule.z, dtype=np.int64)
    return (k[:, None] * z[None, :]) % rule.p


def lattice_nodes(rule: LatticeRule) -> np.ndarray:
    """All p nodes in order k = 0..p-1, shape (p, d), values in [0, 1)."""
    return node_residues(rule) / float(rule.p)


def _iter_node_chunks(rule: LatticeRule) -> Iterator[tuple[int, np.ndarray]]:
    for k_lo in range(0, rule.p, _CHUNK):
        k_hi = min(k_lo + _CHUNK, rule.p)
        yield k_lo, node_residues(rule, k_lo, k_hi) / float(rule.p)


def apply_rule(rule: LatticeRule, f: Integrand) -> complex:
    """Equal-weight average of f over the rule's nodes (compensated sum / p)."""
    if f.dim != rule.dim:
        raise DomainError(f"integrand dimension {f.dim} != rule dimension {rule.dim}")
    chunks: list[np.ndarray] = []
    for k_lo, pts in _iter_node_chunks(rule):
        vals = np.asarray(f.fn(pts)).reshape(-1)
        if vals.size != pts.shape[0]:
            raise EvaluationError(
                f"integrand returned {vals.size} values for {pts.shape[0]} nodes")
        finite = np.isfinite(vals.real) & np.isfinite(vals.imag) \
            if np.iscomplexobj(vals) else np.isfinite(vals)
        if not finite.all():
            bad = int(np.flatnonzero(~finite)[0])
            raise EvaluationError(
                f"non-finite integrand value at node {k_lo + bad} of rule p={rule.p}",
                node_index=k_lo + bad,
            )
        chunks.append(vals)
    allvals = chunks[0] if len(chunks) == 1 else np.concatenate(chunks)
    re = compensated_sum(allvals.real if np.iscomplexobj(allvals) else allvals) / rule.p
    im = compensated_sum(allvals.imag) / rule.p if np.iscomplexobj(allvals) else 0.0
    return complex(re, im)


def dual_indicator(h: Sequence[int], rule: LatticeRule) -> bool:
    """True iff h.z = 0 (mod p).  Python integer arithmetic: overflow-free."""
    if len(h) != rule.dim:
        raise DomainError(f"frequency vector has length {len(h)}, expected {rule.dim}")
    acc = 0
    for hj, zj in zip(h, rule.z):
        acc += int(hj) * int(zj)
    return acc % rule.p == 0


def trig_integrand(poly: TrigPolynomial) -> Integrand:
    """Integrand view of a finite Fourier sum (vectorized term evaluation)."""
    freqs = np.array(sorted(poly.terms), dtype=np.float64)
    coeffs = np.array([poly.terms[tuple(int(v) for v in h)] for h in freqs],
                      dtype=np.complex128)

    def batch(points: np.ndarray) -> np.ndarray:
        phases = points @ freqs.T
        return np.exp(2j * np.pi * phases) @ coeffs

    return Integrand(dim=poly.dim, fn=batch,
                     true_integral=poly.true_integral(), name="trig")
