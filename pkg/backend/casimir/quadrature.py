"""Composite Gauss-Legendre quadrature with panel doubling."""
import logging
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

logger = logging.getLogger(__name__)

DEFAULT_ORDER = 32
MAX_DOUBLINGS = 8


class QuadratureResult(NamedTuple):
    value: np.ndarray
    error: np.ndarray
    panels: int
    converged: bool


@lru_cache(maxsize=16)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def uniform_edges(lo: float, hi: float, n_panels: int) -> np.ndarray:
    return np.linspace(lo, hi, n_panels + 1)


def refine(edges: np.ndarray) -> np.ndarray:
    """Splits every panel in two."""
    mids = 0.5 * (edges[:-1] + edges[1:])
    out = np.empty(2 * len(edges) - 1)
    out[0::2] = edges
    out[1::2] = mids
    return out


def composite_nodes(edges: Sequence[float], order: int = DEFAULT_ORDER) -> Tuple[np.ndarray, np.ndarray]:
    edges = np.asarray(edges, dtype=float)
    t, w = gauss_legendre(order)
    half = 0.5 * np.diff(edges)[:, None]
    centre = 0.5 * (edges[:-1] + edges[1:])[:, None]
    return (centre + half * t).ravel(), (half * w).ravel()


def integrate(func: Callable[[np.ndarray], np.ndarray], edges, order: int = DEFAULT_ORDER) -> np.ndarray:
    """Integrates over the last axis of func(x) on the given panels."""
    x, w = composite_nodes(edges, order)
    return np.asarray(func(x)) @ w


def adaptive_integrate(func: Callable[[np.ndarray], np.ndarray], edges, rel_tol: float,
                       order: int = DEFAULT_ORDER, max_doublings: int = MAX_DOUBLINGS) -> QuadratureResult:
    """
    Doubles the panel count until successive estimates agree to rel_tol/10
    of the largest value in the batch. func may return a batch (..., m).
    """
    edges = np.asarray(edges, dtype=float)
    previous = integrate(func, edges, order)
    for _ in range(max_doublings):
        edges = refine(edges)
        current = integrate(func, edges, order)
        diff = np.abs(current - previous)
        scale = np.max(np.abs(current)) if np.size(current) else 0.0
        if scale == 0.0 or np.max(diff) <= 0.1 * rel_tol * scale:
            return QuadratureResult(current, diff, len(edges) - 1, True)
        previous = current
    logger.warning("Quadrature did not reach rel_tol=%g with %d panels", rel_tol, len(edges) - 1)
    return QuadratureResult(previous, diff, len(edges) - 1, False)
