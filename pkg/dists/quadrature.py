"""
Gauss-Legendre quadrature on finite intervals.
"""

from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from utilities.error_handler import DomainError


@lru_cache(maxsize=16)
def _nodes(points: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(points)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(func: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, points: int) -> float:
    """Integral of a vectorized ``func`` over [lo, hi]; zero-width intervals give 0."""
    if points < 1:
        raise DomainError(f"quadrature needs at least one node, got {points}")
    if hi == lo:
        return 0.0
    nodes, weights = _nodes(int(points))
    half = 0.5 * (hi - lo)
    x = lo + half * (nodes + 1.0)
    return float(half * np.dot(weights, func(x)))
