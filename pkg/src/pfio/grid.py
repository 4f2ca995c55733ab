"""Discretized product spaces R^{N_1} x ... x R^{N_n}.

The ambient space R^N is split into n factors ("blocks") of dimensions
N_1, ..., N_n.  Physical and frequency lattices are both centered at the
origin and reciprocal to each other (spacing h per axis pairs with dual
spacing 1/(2L) so that h * M * dual = 1), which makes the discrete
transform below unitary for Riemann-sum inner products: no stray factors
appear in the Plancherel identity.

Fields are stored in "natural" centered order (coordinates increase along
each axis); the fftshift juggling required by numpy's FFT layout is kept
inside ``forward_transform`` / ``inverse_transform``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

__all__ = [
    "GridError",
    "ProductSpaceShape",
    "GridSpec",
    "SampledField",
    "make_grid",
    "forward_transform",
    "inverse_transform",
    "lp_norm",
]


class GridError(ValueError):
    """Invalid grid sizing or a domain-tag mismatch."""


@dataclass(frozen=True)
class ProductSpaceShape:
    """Splitting N = N_1 + ... + N_n of the ambient dimension into factors."""

    dims: tuple[int, ...]

    def __post_init__(self):
        if len(self.dims) < 1:
            raise GridError("product space needs at least one factor")
        if any(int(d) != d or d < 1 for d in self.dims):
            raise GridError(f"factor dimensions must be positive integers, got {self.dims}")
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total(self) -> int:
        return sum(self.dims)

    @property
    def block_slices(self) -> tuple[slice, ...]:
        """Slice of the flat coordinate axis occupied by each factor."""
        offsets = np.concatenate([[0], np.cumsum(self.dims)])
        return tuple(slice(int(a), int(b)) for a, b in zip(offsets[:-1], offsets[1:]))

    def split(self, v: np.ndarray) -> list[np.ndarray]:
        """Split an (..., N) coordinate array into per-factor views."""
        return [v[..., s] for s in self.block_slices]


@dataclass(frozen=True)
class GridSpec:
    """Centered lattice on a box prod_k [-L_k, L_k) with even sample counts.

    Per axis k: spacing h_k = 2 L_k / M_k, dual spacing 1/(2 L_k), and the
    dual lattice covers |xi_k| <= Nyquist = M_k / (4 L_k).
    """

    shape: ProductSpaceShape
    samples: tuple[int, ...]
    half_width: tuple[float, ...]

    def __post_init__(self):
        N = self.shape.total
        if len(self.samples) != N or len(self.half_width) != N:
            raise GridError(
                f"need {N} per-axis sample counts and half-widths, "
                f"got {len(self.samples)} and {len(self.half_width)}"
            )
        if any(m < 8 or m % 2 for m in self.samples):
            raise GridError(f"sample counts must be even and >= 8, got {self.samples}")
        if any(not (w > 0) for w in self.half_width):
            raise GridError(f"half-widths must be positive, got {self.half_width}")
        object.__setattr__(self, "samples", tuple(int(m) for m in self.samples))
        object.__setattr__(self, "half_width", tuple(float(w) for w in self.half_width))

    @property
    def spacing(self) -> tuple[float, ...]:
        return tuple(2 * w / m for w, m in zip(self.half_width, self.samples))

    @property
    def dual_spacing(self) -> tuple[float, ...]:
        return tuple(1.0 / (2 * w) for w in self.half_width)

    @property
    def nyquist(self) -> tuple[float, ...]:
        return tuple(m / (4 * w) for m, w in zip(self.samples, self.half_width))

    @property
    def cell_volume(self) -> float:
        return prod(self.spacing)

    @property
    def dual_cell_volume(self) -> float:
        return prod(self.dual_spacing)

    def axis(self, k: int) -> np.ndarray:
        """Physical coordinates along axis k (length M_k, contains 0)."""
        m = self.samples[k]
        return (np.arange(m) - m // 2) * self.spacing[k]

    def dual_axis(self, k: int) -> np.ndarray:
        """Frequency coordinates along axis k (length M_k, contains 0)."""
        m = self.samples[k]
        return (np.arange(m) - m // 2) * self.dual_spacing[k]

    def mesh(self, domain: str = "physical") -> list[np.ndarray]:
        """Sparse coordinate meshes (broadcastable against field values)."""
        axes = self.axis if domain == "physical" else self.dual_axis
        return list(np.meshgrid(*[axes(k) for k in range(self.shape.total)],
                                indexing="ij", sparse=True))

    def points(self, domain: str = "physical") -> np.ndarray:
        """Dense (M_1, ..., M_N, N) coordinate array."""
        axes = self.axis if domain == "physical" else self.dual_axis
        grids = np.meshgrid(*[axes(k) for k in range(self.shape.total)], indexing="ij")
        return np.stack(grids, axis=-1)

    def index_of(self, x: np.ndarray, domain: str = "physical") -> tuple[int, ...]:
        """Lattice index of the grid point nearest to x."""
        step = self.spacing if domain == "physical" else self.dual_spacing
        idx = []
        for k in range(self.shape.total):
            i = int(round(x[k] / step[k])) + self.samples[k] // 2
            if not (0 <= i < self.samples[k]):
                raise GridError(f"point {x} falls outside the grid along axis {k}")
            idx.append(i)
        return tuple(idx)


@dataclass
class SampledField:
    """Complex samples of a function on the physical or frequency lattice."""

    grid: GridSpec
    values: np.ndarray
    domain: str = "physical"

    def __post_init__(self):
        if self.domain not in ("physical", "frequency"):
            raise GridError(f"unknown domain tag {self.domain!r}")
        if tuple(self.values.shape) != self.grid.samples:
            raise GridError(
                f"value shape {self.values.shape} does not match grid {self.grid.samples}"
            )
        self.values = np.asarray(self.values, dtype=complex)

    def copy_with(self, values: np.ndarray, domain: str | None = None) -> "SampledField":
        return SampledField(self.grid, values, self.domain if domain is None else domain)


def make_grid(shape: ProductSpaceShape, samples, half_width) -> GridSpec:
    """Build a GridSpec, broadcasting scalar samples / half_width over axes."""
    N = shape.total
    if np.isscalar(samples):
        samples = (int(samples),) * N
    if np.isscalar(half_width):
        half_width = (float(half_width),) * N
    return GridSpec(shape, tuple(samples), tuple(half_width))


def forward_transform(f: SampledField) -> SampledField:
    """Riemann-sum Fourier transform, fhat(xi) = sum_x f(x) e^{-2pi i x.xi} h^N.

    Unitary for the lattice inner products: ||fhat||_2 = ||f||_2 exactly up
    to FFT rounding.  The ifftshift is applied before the FFT and fftshift
    after, so both input and output are in centered order.
    """
    if f.domain != "physical":
        raise GridError("forward_transform expects a physical-domain field")
    vals = np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(f.values)))
    return SampledField(f.grid, vals * f.grid.cell_volume, "frequency")


def inverse_transform(g: SampledField) -> SampledField:
    """Inverse of ``forward_transform``: f(x) = sum_xi g(xi) e^{+2pi i x.xi} dxi^N."""
    if g.domain != "frequency":
        raise GridError("inverse_transform expects a frequency-domain field")
    vals = np.fft.fftshift(np.fft.ifftn(np.fft.ifftshift(g.values)))
    return SampledField(g.grid, vals / g.grid.cell_volume, "physical")


def lp_norm(f: SampledField, p: float) -> float:
    """Riemann-sum L^p norm using the cell volume of the field's domain.

    p = inf returns the max modulus.  p must satisfy 1 <= p <= inf.
    """
    if not p >= 1:
        raise GridError(f"p must be >= 1, got {p}")
    vol = f.grid.cell_volume if f.domain == "physical" else f.grid.dual_cell_volume
    a = np.abs(f.values)
    if np.isinf(p):
        return float(a.max())
    return float((np.sum(a ** p) * vol) ** (1.0 / p))
