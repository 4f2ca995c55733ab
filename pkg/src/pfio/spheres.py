"""Deterministic point sets on unit spheres S^{d-1}."""

from __future__ import annotations

import numpy as np

__all__ = ["circle_points", "fibonacci_points", "unit_directions"]


def circle_points(count: int) -> np.ndarray:
    """count equally spaced unit vectors on the circle, starting at (1, 0)."""
    theta = 2 * np.pi * np.arange(count) / count
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def fibonacci_points(count: int) -> np.ndarray:
    """Fibonacci lattice on S^2: near-uniform spacing ~ sqrt(4 pi / count)."""
    k = np.arange(count)
    # golden-angle longitude, equal-area latitude
    phi = np.pi * (3.0 - np.sqrt(5.0)) * k
    z = 1.0 - (2.0 * k + 1.0) / count
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=-1)


def unit_directions(dim: int, count: int) -> np.ndarray:
    """A deterministic spread of `count` unit vectors in R^dim (dim <= 3)."""
    if dim == 1:
        return np.array([[1.0], [-1.0]])[: max(1, min(2, count))]
    if dim == 2:
        return circle_points(count)
    if dim == 3:
        return fibonacci_points(count)
    raise ValueError(f"unit_directions supports dim <= 3, got {dim}")
