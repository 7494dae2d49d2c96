"""Gauss-Hermite rules for Gaussian weights on the real line and the plane."""
from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial.hermite import hermgauss


@lru_cache(maxsize=32)
def _hermgauss(order: int):
    x, w = hermgauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def normal_rule(order: int, sigma: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for E[f(p)] with p ~ N(0, sigma^2); weights sum to 1."""
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    x, w = _hermgauss(order)
    return np.sqrt(2.0) * sigma * x, w / np.sqrt(np.pi)


def complex_gaussian_rule(order: int, nbar: float, center: complex = 0j):
    """Nodes/weights for the density exp(-|alpha - center|^2 / nbar) / (pi nbar).

    Tensor product of 1-D rules in Re/Im; node ordering is fixed (row-major)
    so sums over it are reproducible.
    """
    x, w = _hermgauss(order)
    s = np.sqrt(nbar)
    nodes = center + s * (x[:, None] + 1j * x[None, :])
    weights = np.outer(w, w) / np.pi
    return nodes.ravel(), weights.ravel()
