"""Compensated accumulation helpers.

All quadrature sums in this package go through :func:`compensated_sum`, which
splits the input into fixed 4096-element blocks, sums each block with numpy's
pairwise reduction, and combines the block sums exactly with ``math.fsum``.
The block structure is fixed, so the result is a deterministic function of the
value sequence alone, independent of chunked evaluation or worker count.
"""

from __future__ import annotations

import math

import numpy as np

_BLOCK = 4096


def compensated_sum(values: np.ndarray) -> float:
    """Sum a float array with fixed-block pairwise reduction + exact combination."""
    x = np.ascontiguousarray(values, dtype=np.float64).ravel()
    if x.size == 0:
        return 0.0
    blocks = (float(np.sum(x[i:i + _BLOCK])) for i in range(0, x.size, _BLOCK))
    return math.fsum(blocks)


def compensated_mean(values: np.ndarray, count: int) -> float:
    """compensated_sum(values) / count, dividing once at the end."""
    return compensated_sum(values) / count


def compensated_complex_mean(values: np.ndarray, count: int) -> complex:
    """Componentwise compensated mean of a (possibly real) value array."""
    v = np.asarray(values)
    if np.iscomplexobj(v):
        return complex(compensated_sum(v.real) / count, compensated_sum(v.imag) / count)
    return complex(compensated_sum(v) / count, 0.0)
