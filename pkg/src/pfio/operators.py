"""Desk-scale Fourier integral operators and their kernels.

An operator is specified by a product phase, a symbol, and a grid:

    (F f)(x) = sum_xi e^{2 pi i Phi(x, xi)} sigma(x, xi) W(xi) fhat(xi) dxi,

a Riemann sum over the dual lattice.  W is a fixed frequency window: a
smooth roll-off psi0(|xi| / (0.8 Nyquist)) that suppresses periodization
ringing at the top of the band, times (1 - psi) excising the coordinate
subspaces when ``low_cut`` is set.  Band-limited inputs below the
roll-off knee never feel W.

Two evaluation routes coexist on purpose.  The generic route sums the
quadrature directly (chunked dense phase matrices) and works for every
phase/symbol.  When all phase factors are shift type
(Phi_i = (x^i - a_i) . xi^i + h_i(xi^i)) and the symbol is separable
(sigma = x_part(x) xi_part(xi)), the operator collapses to

    (F f)(x) = x_part(x) * IFT[ e^{2 pi i (h(xi) - a.xi)} xi_part W fhat ](x),

one FFT.  The two routes cross-validate each other in the test suite and
the fast one makes the kernel experiments tractable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .angular import axis_cutoff, cone_multiplier
from .dyadic import DyadicTuple, check_hypothesis_H, delta_t, delta_t_s, smooth_step
from .grid import (GridError, GridSpec, SampledField, forward_transform,
                   inverse_transform)
from .phases import ProductPhase
from .symbols import SymbolSpec

__all__ = [
    "FioSpec",
    "SampledKernel",
    "frequency_window",
    "fast_multiplier",
    "apply_fio",
    "apply_adjoint",
    "kernel_profile",
    "kernel_omega_t",
    "kernel_omega_t_s_nu",
    "kernel_omega_sharp",
    "kernel_omega_flat",
    "analytic_family_apply",
]

_CHUNK = 1 << 22  # complex entries per dense phase-matrix chunk


@dataclass(frozen=True)
class FioSpec:
    """Operator specification; ``low_cut`` excises a collar around xi^i = 0."""

    phase: ProductPhase
    symbol: SymbolSpec
    grid: GridSpec
    low_cut: bool = False
    roll_fraction: float = 0.8

    def __post_init__(self):
        if self.phase.shape.dims != self.grid.shape.dims:
            raise GridError("phase factor dimensions do not match the grid")
        if self.symbol.shape.dims != self.grid.shape.dims:
            raise GridError("symbol dimensions do not match the grid")
        if not (0.0 < self.roll_fraction <= 1.0):
            raise GridError("roll_fraction must lie in (0, 1]")

    @property
    def has_fast_path(self) -> bool:
        return self.phase.is_shift_type and self.symbol.separable


def frequency_window(spec: FioSpec) -> np.ndarray:
    """Roll-off (and optional axis excision) sampled on the dual lattice."""
    pts = spec.grid.points("frequency")
    knee = spec.roll_fraction * min(spec.grid.nyquist)
    w = smooth_step(np.linalg.norm(pts, axis=-1) / knee)
    if spec.low_cut:
        w = w * (1.0 - axis_cutoff(spec.grid.shape, pts))
    return w


def fast_multiplier(spec: FioSpec) -> np.ndarray:
    """e^{2 pi i (h(xi) - a.xi)} xi_part(xi) W(xi) for shift-type specs."""
    if not spec.has_fast_path:
        raise GridError("spec has no shift structure; use the generic route")
    pts = spec.grid.points("frequency")
    h = spec.phase.freq_offset(pts) - pts @ spec.phase.shift
    return np.exp(2j * np.pi * h) * spec.symbol.xi_part(pts) * frequency_window(spec)


def _chunks(total: int, width: int):
    for a in range(0, total, width):
        yield slice(a, min(a + width, total))


def apply_fio(spec: FioSpec, f: SampledField,
              extra_multiplier: np.ndarray | None = None) -> SampledField:
    """Apply F to a physical-domain field.

    ``extra_multiplier`` (over the dual lattice) is inserted next to W;
    passing delta_t yields the frequency-localized piece of the operator.
    """
    if f.domain != "physical":
        raise GridError("apply_fio expects a physical-domain field")
    if f.grid is not spec.grid and f.grid != spec.grid:
        raise GridError("field and operator live on different grids")
    fhat = forward_transform(f)
    extra = 1.0 if extra_multiplier is None else extra_multiplier
    if spec.has_fast_path:
        mult = fast_multiplier(spec) * extra * fhat.values
        out = inverse_transform(fhat.copy_with(mult))
        xw = spec.symbol.x_part(spec.grid.points())
        return out.copy_with(xw * out.values)
    window = frequency_window(spec) * extra
    N = spec.grid.shape.total
    X = spec.grid.points().reshape(-1, N)
    Xi = spec.grid.points("frequency").reshape(-1, N)
    weights = (window * fhat.values).reshape(-1) * spec.grid.dual_cell_volume
    out = np.empty(len(X), dtype=complex)
    width = max(1, _CHUNK // len(Xi))
    for sl in _chunks(len(X), width):
        xs = X[sl][:, None, :]
        ph = spec.phase.eval(xs, Xi[None, :, :])
        sig = spec.symbol.eval(xs, Xi[None, :, :])
        out[sl] = (np.exp(2j * np.pi * ph) * sig) @ weights
    return SampledField(spec.grid, out.reshape(spec.grid.samples), "physical")


def apply_adjoint(spec: FioSpec, g: SampledField,
                  extra_multiplier: np.ndarray | None = None) -> SampledField:
    """Adjoint of ``apply_fio`` for the Riemann-sum inner products."""
    if g.domain != "physical":
        raise GridError("apply_adjoint expects a physical-domain field")
    extra = 1.0 if extra_multiplier is None else extra_multiplier
    if spec.has_fast_path:
        xw = spec.symbol.x_part(spec.grid.points())
        inner = forward_transform(g.copy_with(np.conj(xw) * g.values))
        mult = np.conj(fast_multiplier(spec) * extra) * inner.values
        return inverse_transform(inner.copy_with(mult))
    window = frequency_window(spec) * extra
    N = spec.grid.shape.total
    X = spec.grid.points().reshape(-1, N)
    Xi = spec.grid.points("frequency").reshape(-1, N)
    gv = g.values.reshape(-1) * spec.grid.cell_volume
    qstar = np.empty(len(Xi), dtype=complex)
    width = max(1, _CHUNK // len(X))
    for sl in _chunks(len(Xi), width):
        xis = Xi[sl][:, None, :]
        ph = spec.phase.eval(X[None, :, :], xis)
        sig = spec.symbol.eval(X[None, :, :], xis)
        qstar[sl] = (np.exp(-2j * np.pi * ph) * np.conj(sig)) @ gv
    vals = (window * qstar.reshape(spec.grid.samples))
    return inverse_transform(SampledField(spec.grid, vals, "frequency"))


@dataclass
class SampledKernel:
    """One slice Omega(x, .) of an operator kernel over the y-lattice."""

    grid: GridSpec
    base_point: np.ndarray
    values: np.ndarray
    tag: str


def _freq_to_kernel(grid: GridSpec, mult: np.ndarray) -> np.ndarray:
    """y -> sum_xi mult(xi) e^{-2 pi i y.xi} dxi on the physical lattice."""
    g = SampledField(grid, np.conj(mult), "frequency")
    return np.conj(inverse_transform(g).values)


def kernel_profile(spec: FioSpec, extra_multiplier: np.ndarray | None = None) -> SampledField:
    """Convolution profile G with Omega(x, y) = x_part(x) G(x - a - y).

    Shift-type specs only: G = IFT[e^{2 pi i h} xi_part W extra], sampled
    on the physical lattice (periodic).
    """
    if not spec.has_fast_path:
        raise GridError("kernel profiles require the shift-structure fast path")
    pts = spec.grid.points("frequency")
    mult = (np.exp(2j * np.pi * spec.phase.freq_offset(pts))
            * spec.symbol.xi_part(pts) * frequency_window(spec))
    if extra_multiplier is not None:
        mult = mult * extra_multiplier
    return inverse_transform(SampledField(spec.grid, mult, "frequency"))


def _require_resolved(spec: FioSpec, tup: DyadicTuple):
    if not (tup.rho == 0.0 or check_hypothesis_H(tup)):
        raise ValueError("tuple violates the dilation hypothesis")
    if 2.0 ** (max(tup.t) + 1) > min(spec.grid.nyquist):
        raise GridError("tuple level exceeds the band resolved by the grid")


def kernel_omega_t(spec: FioSpec, tup: DyadicTuple, x) -> SampledKernel:
    """Omega_t(x, .) for fixed x: one inverse transform per base point.

    Omega_t(x, y) = sum_xi e^{2 pi i (Phi(x, xi) - y.xi)} delta_t sigma W dxi.
    """
    _require_resolved(spec, tup)
    x = np.asarray(x, dtype=float)
    pts = spec.grid.points("frequency")
    mult = (np.exp(2j * np.pi * spec.phase.eval(x, pts))
            * delta_t(tup, spec.grid.shape, pts)
            * spec.symbol.eval(x, pts) * frequency_window(spec))
    return SampledKernel(spec.grid, x, _freq_to_kernel(spec.grid, mult), "omega_t")


def kernel_omega_t_s_nu(spec: FioSpec, tup: DyadicTuple, s: tuple[int, ...],
                        nu: dict, x, nets: dict | None = None,
                        complement: bool = False) -> SampledKernel:
    """Angularly localized kernel piece at levels s and directions nu.

    Multiplier: chi factors over blocks in U times delta_{t,s}, with the
    (1 - psi) axis excision (or psi itself for the complement piece).
    Summing values plus complements over all (s, nu) with 1 <= s_i <= t_i + 1
    reproduces Omega_t when rho = 0 and every t_i >= 2.
    """
    from .angular import build_net

    _require_resolved(spec, tup)
    shape = spec.grid.shape
    if nets is None:
        # the complement piece is the axis collar alone: no chi factors
        nets = {} if complement else {i: build_net(shape.dims[i], s[i])
                                      for i in range(shape.n) if shape.dims[i] >= 2}
    x = np.asarray(x, dtype=float)
    pts = spec.grid.points("frequency")
    mult = (np.exp(2j * np.pi * spec.phase.eval(x, pts))
            * delta_t_s(tup, s, shape, pts)
            * cone_multiplier(shape, nets, nu, pts, complement=complement)
            * spec.symbol.eval(x, pts) * frequency_window(spec))
    tag = "omega_t_s_nu_c" if complement else "omega_t_s_nu"
    return SampledKernel(spec.grid, x, _freq_to_kernel(spec.grid, mult), tag)


def kernel_omega_sharp(spec: FioSpec, xi, eta) -> complex:
    """Omega#(xi, eta) = int e^{2 pi i (Phi(x, eta) - Phi(x, xi))} sigma(x, eta)
    conj(sigma(x, xi)) dx, by physical-lattice quadrature."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    X = spec.grid.points()
    ph = spec.phase.eval(X, eta) - spec.phase.eval(X, xi)
    amp = spec.symbol.eval(X, eta) * np.conj(spec.symbol.eval(X, xi))
    return complex(np.sum(np.exp(2j * np.pi * ph) * amp) * spec.grid.cell_volume)


def kernel_omega_flat(spec: FioSpec, x, y) -> complex:
    """Omega_b(x, y) = int e^{2 pi i (Phi(x, xi) - Phi(y, xi))} sigma(x, xi)
    conj(sigma(y, xi)) W(xi) dxi, by dual-lattice quadrature.

    Lattice points sitting exactly on a coordinate subspace are dropped:
    the phase extends continuously but its gradient does not, and the set
    has quadrature weight of a single cell.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    pts = spec.grid.points("frequency")
    shape = spec.grid.shape
    keep = np.ones(pts.shape[:-1], dtype=bool)
    for sl in shape.block_slices:
        keep &= np.linalg.norm(pts[..., sl], axis=-1) > 0
    ph = spec.phase.eval(x, pts) - spec.phase.eval(y, pts)
    amp = spec.symbol.eval(x, pts) * np.conj(spec.symbol.eval(y, pts))
    vals = np.exp(2j * np.pi * ph) * amp * frequency_window(spec) * keep
    return complex(np.sum(vals) * spec.grid.dual_cell_volume)


def analytic_family_apply(spec: FioSpec, s: complex, f: SampledField) -> SampledField:
    """Member F_s of the analytic family interpolating around F.

    F_s carries the extra symbol (1 + |xi|^2)^{gamma(s)/2} with
    gamma(s) = -m - s (N - n)/2 and the damping prefactor e^{(s - v)^2},
    v = -2m / (N - n); at s = v the member reduces to F itself.
    Requires N > n and 0 <= Re s <= 1.
    """
    shape = spec.grid.shape
    N, n = shape.total, shape.n
    if N <= n:
        raise GridError("the analytic family needs at least one block with N_i >= 2")
    if not (0.0 <= s.real <= 1.0):
        raise ValueError("Re s must lie in [0, 1]")
    m = spec.symbol.order
    gamma = -m - s * (N - n) / 2.0
    vartheta = -2.0 * m / (N - n)
    pts = spec.grid.points("frequency")
    extra = (1.0 + np.sum(pts ** 2, axis=-1)) ** (gamma / 2.0)
    pref = np.exp((s - vartheta) ** 2)
    out = apply_fio(spec, f, extra_multiplier=extra)
    return out.copy_with(pref * out.values)
