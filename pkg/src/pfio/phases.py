"""Phase functions Phi(x, xi) = sum_i Phi_i(x^i, xi^i) on product spaces.

Each factor Phi_i is positively homogeneous of degree one in xi^i, smooth
away from xi^i = 0, and non-degenerate: det d^2 Phi_i / dx^i dxi^i != 0.
Factors evaluate with numpy broadcasting over leading dimensions; the
point-level API ``eval_phase`` enforces the xi^i != 0 domain restriction,
while grid-level quadratures extend values by continuity and mask the
singular lattice points themselves.

Factors of "shift type", Phi_i = (x^i - a_i) . xi^i + h_i(xi^i), expose
``shift`` and ``freq_offset`` so that downstream operator applications can
collapse to a single Fourier multiplier.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .grid import ProductSpaceShape
from .spheres import unit_directions

__all__ = [
    "SingularFrequencyError",
    "PhaseFactor",
    "ProductPhase",
    "linear_factor",
    "translation_factor",
    "half_wave_factor",
    "perturbed_factor",
    "eval_phase",
    "check_homogeneity",
    "check_nondegeneracy",
    "sample_singular_locus",
    "verify_cone_separation",
    "HomogeneityReport",
    "NondegeneracyReport",
    "ConeSeparationReport",
]


class SingularFrequencyError(ValueError):
    """A phase was evaluated at a point with some xi^i = 0."""


def _norm(v):
    return np.linalg.norm(v, axis=-1)


def _unit(v):
    n = _norm(v)
    safe = np.where(n > 0, n, 1.0)
    return v / safe[..., None]


def _dot(a, b):
    return np.sum(a * b, axis=-1)


@dataclass(frozen=True)
class PhaseFactor:
    """One factor Phi_i acting on a block of dimension ``dim``.

    eval / grad_xi / grad_x broadcast over leading axes; mixed_hessian may
    be None, in which case checks fall back to finite differences.
    """

    dim: int
    kind: str
    eval: Callable
    grad_xi: Callable
    grad_x: Callable
    mixed_hessian: Callable | None = None
    shift: np.ndarray | None = None
    freq_offset: Callable | None = None

    @property
    def is_shift_type(self) -> bool:
        return self.shift is not None and self.freq_offset is not None


def _eye_like(x, dim):
    base = np.broadcast_shapes(np.asarray(x).shape[:-1])
    return np.broadcast_to(np.eye(dim), base + (dim, dim))


def linear_factor(dim: int) -> PhaseFactor:
    """Phi(x, xi) = x . xi."""
    return PhaseFactor(
        dim, "linear",
        eval=lambda x, xi: _dot(x, xi),
        grad_xi=lambda x, xi: np.broadcast_to(x, np.broadcast(x, xi).shape).copy(),
        grad_x=lambda x, xi: np.broadcast_to(xi, np.broadcast(x, xi).shape).copy(),
        mixed_hessian=lambda x, xi: _eye_like(x, dim),
        shift=np.zeros(dim),
        freq_offset=lambda xi: np.zeros(np.asarray(xi).shape[:-1]),
    )


def translation_factor(dim: int, shift) -> PhaseFactor:
    """Phi(x, xi) = (x - a) . xi: the operator translates by a."""
    a = np.asarray(shift, dtype=float)
    if a.shape != (dim,):
        raise ValueError(f"shift must have shape ({dim},), got {a.shape}")
    return PhaseFactor(
        dim, "translation",
        eval=lambda x, xi: _dot(x - a, xi),
        grad_xi=lambda x, xi: np.broadcast_to(x - a, np.broadcast(x, xi).shape).copy(),
        grad_x=lambda x, xi: np.broadcast_to(xi, np.broadcast(x, xi).shape).copy(),
        mixed_hessian=lambda x, xi: _eye_like(x, dim),
        shift=a,
        freq_offset=lambda xi: np.zeros(np.asarray(xi).shape[:-1]),
    )


def half_wave_factor(dim: int, sign: int = +1) -> PhaseFactor:
    """Phi(x, xi) = x . xi +/- |xi|: the order-one model with curved singular locus."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    s = float(sign)
    return PhaseFactor(
        dim, "half_wave_plus" if sign > 0 else "half_wave_minus",
        eval=lambda x, xi: _dot(x, xi) + s * _norm(xi),
        grad_xi=lambda x, xi: x + s * _unit(xi),
        grad_x=lambda x, xi: np.broadcast_to(xi, np.broadcast(x, xi).shape).copy(),
        mixed_hessian=lambda x, xi: _eye_like(x, dim),
        shift=np.zeros(dim),
        freq_offset=lambda xi: s * _norm(xi),
    )


def perturbed_factor(dim: int, epsilon: float, bump_radius: float = 1.0) -> PhaseFactor:
    """Phi(x, xi) = x . xi + eps g(x) |xi| with g the standard bump.

    Non-degeneracy: the mixed Hessian is I + eps grad g(x) (xi/|xi|)^T, a
    rank-one perturbation with det = 1 + eps grad g . xi/|xi|, so small eps
    keeps det bounded away from zero (max |grad g| is about 2.1 / R).
    """
    from .symbols import bump_profile

    if not (0 <= epsilon < 0.3):
        raise ValueError("epsilon should be small; the factor degenerates beyond ~0.3")
    R = float(bump_radius)

    def g(x):
        return bump_profile(_norm(x) / R)

    def grad_g(x):
        r = _norm(x) / R
        db = np.zeros_like(r)
        inside = (r > 0) & (r < 1)
        with np.errstate(divide="ignore", over="ignore"):
            u = 1.0 - r[inside] ** 2
            db[inside] = np.exp(1.0 - 1.0 / u) * (-2.0 * r[inside] / u ** 2)
        return (db / R)[..., None] * _unit(x)

    return PhaseFactor(
        dim, "perturbed",
        eval=lambda x, xi: _dot(x, xi) + epsilon * g(x) * _norm(xi),
        grad_xi=lambda x, xi: x + epsilon * g(x)[..., None] * _unit(xi),
        grad_x=lambda x, xi: xi + epsilon * _norm(xi)[..., None] * grad_g(x),
        mixed_hessian=lambda x, xi: _eye_like(x, dim)
        + epsilon * grad_g(x)[..., :, None] * _unit(xi)[..., None, :],
    )


@dataclass(frozen=True)
class ProductPhase:
    """Phi(x, xi) = sum_i Phi_i(x^i, xi^i)."""

    factors: tuple[PhaseFactor, ...]

    @property
    def shape(self) -> ProductSpaceShape:
        return ProductSpaceShape(tuple(f.dim for f in self.factors))

    def eval(self, x, xi):
        shape = self.shape
        xs, xis = shape.split(np.asarray(x, float)), shape.split(np.asarray(xi, float))
        return sum(f.eval(xb, xib) for f, xb, xib in zip(self.factors, xs, xis))

    def grad_x(self, x, xi):
        shape = self.shape
        xs, xis = shape.split(np.asarray(x, float)), shape.split(np.asarray(xi, float))
        return np.concatenate(
            [f.grad_x(xb, xib) for f, xb, xib in zip(self.factors, xs, xis)], axis=-1)

    def grad_xi(self, x, xi):
        shape = self.shape
        xs, xis = shape.split(np.asarray(x, float)), shape.split(np.asarray(xi, float))
        return np.concatenate(
            [f.grad_xi(xb, xib) for f, xb, xib in zip(self.factors, xs, xis)], axis=-1)

    @property
    def is_shift_type(self) -> bool:
        return all(f.is_shift_type for f in self.factors)

    @property
    def shift(self) -> np.ndarray:
        if not self.is_shift_type:
            raise ValueError("phase has no shift structure")
        return np.concatenate([f.shift for f in self.factors])

    def freq_offset(self, xi):
        """h(xi) = sum_i h_i(xi^i) for shift-type phases."""
        if not self.is_shift_type:
            raise ValueError("phase has no shift structure")
        xis = self.shape.split(np.asarray(xi, float))
        return sum(f.freq_offset(xib) for f, xib in zip(self.factors, xis))


def eval_phase(phase: ProductPhase, x, xi) -> float:
    """Evaluate Phi at a single point, rejecting any vanishing block xi^i."""
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    for i, blk in enumerate(phase.shape.split(xi)):
        if np.linalg.norm(blk) == 0.0:
            raise SingularFrequencyError(f"xi block {i} vanishes; the phase is singular there")
    return float(phase.eval(x, xi))


@dataclass
class HomogeneityReport:
    max_violation: float
    tolerance: float
    passed: bool


@dataclass
class NondegeneracyReport:
    min_abs_det: float
    threshold: float
    passed: bool


@dataclass
class ConeSeparationReport:
    min_ratio: float
    aperture: float
    passed: bool


def check_homogeneity(factor: PhaseFactor, sample_count: int = 64,
                      lambdas=(0.5, 2.0, 3.7), tol: float = 1e-9,
                      seed: int = 7) -> HomogeneityReport:
    """Check Phi(x, l xi) = l Phi(x, xi) and degree-0 grad_xi on random samples."""
    rng = np.random.default_rng(seed)
    d = factor.dim
    x = rng.uniform(-2, 2, size=(sample_count, d))
    xi = rng.normal(size=(sample_count, d))
    xi *= (rng.uniform(0.5, 8.0, size=sample_count) / _norm(xi))[:, None]
    worst = 0.0
    base = factor.eval(x, xi)
    gbase = factor.grad_xi(x, xi)
    for lam in lambdas:
        v = factor.eval(x, lam * xi)
        rel = np.abs(v - lam * base) / (1.0 + np.abs(lam * base))
        worst = max(worst, float(rel.max()))
        g = factor.grad_xi(x, lam * xi)
        grel = _norm(g - gbase) / (1.0 + _norm(gbase))
        worst = max(worst, float(grel.max()))
    return HomogeneityReport(worst, tol, worst <= tol)


def check_nondegeneracy(factor: PhaseFactor, sample_count: int = 48,
                        threshold: float = 1e-6, fd_step: float = 1e-4,
                        seed: int = 11) -> NondegeneracyReport:
    """min |det d^2 Phi / dx dxi| over random samples must exceed threshold.

    Uses the analytic mixed Hessian when the factor provides one and a
    central difference of grad_xi in x otherwise.
    """
    rng = np.random.default_rng(seed)
    d = factor.dim
    x = rng.uniform(-1.5, 1.5, size=(sample_count, d))
    xi = rng.normal(size=(sample_count, d))
    xi *= (rng.uniform(0.5, 4.0, size=sample_count) / _norm(xi))[:, None]
    if factor.mixed_hessian is not None:
        H = factor.mixed_hessian(x, xi)
    else:
        cols = []
        for j in range(d):
            e = np.zeros(d)
            e[j] = fd_step
            cols.append((factor.grad_xi(x + e, xi) - factor.grad_xi(x - e, xi)) / (2 * fd_step))
        H = np.stack(cols, axis=-2)  # H[..., j, k] = d_xj grad_xi_k
    dets = np.abs(np.linalg.det(H))
    m = float(dets.min())
    return NondegeneracyReport(m, threshold, m >= threshold)


def sample_singular_locus(phase: ProductPhase, x, directions_per_factor: int = 32) -> np.ndarray:
    """Points grad_xi Phi(x, omega) over a product of unit direction nets.

    The gradient is degree-0 homogeneous per block, so the singular locus
    Sigma_x is swept out by unit directions factor by factor.
    """
    x = np.asarray(x, dtype=float)
    shape = phase.shape
    xs = shape.split(x)
    per_factor = []
    for f, xb in zip(phase.factors, xs):
        dirs = unit_directions(f.dim, directions_per_factor)
        per_factor.append(f.grad_xi(np.broadcast_to(xb, dirs.shape), dirs))
    counts = [p.shape[0] for p in per_factor]
    out = np.zeros((int(np.prod(counts)), shape.total))
    for row, combo in enumerate(np.ndindex(*counts)):
        out[row] = np.concatenate([per_factor[i][c] for i, c in enumerate(combo)])
    return out


def _cone_samples(rng, axis, aperture, count, radius_range=(1.0, 16.0)):
    """Random points of the cone {|zeta - (zeta.axis) axis| <= aperture |zeta|}."""
    N = axis.shape[0]
    u = rng.normal(size=(count, N))
    u -= (u @ axis)[:, None] * axis
    norms = _norm(u)
    norms[norms == 0] = 1.0
    u *= (rng.uniform(0, 0.95 * aperture, size=count) / norms)[:, None]
    d = _unit(axis + u)
    r = np.exp(rng.uniform(np.log(radius_range[0]), np.log(radius_range[1]), size=count))
    return r[:, None] * d


def verify_cone_separation(phase: ProductPhase, cone_axis, aperture: float = 0.1,
                           sample_count: int = 128, min_ratio: float = 1e-3,
                           seed: int = 23) -> ConeSeparationReport:
    """Lower-bound |grad_x (Phi(x, xi) - Phi(x, eta))| / |xi - eta| on a narrow cone.

    Pairs xi, eta are drawn inside the cone around ``cone_axis`` with the
    given aperture; the reported minimum over pairs and base points x must
    stay above ``min_ratio`` for the integration-by-parts gain to be usable.
    """
    axis = np.asarray(cone_axis, dtype=float)
    axis /= np.linalg.norm(axis)
    for i, blk in enumerate(phase.shape.split(axis)):
        if np.linalg.norm(blk) < 1e-12:
            raise SingularFrequencyError(f"cone axis vanishes on block {i}")
    rng = np.random.default_rng(seed)
    xi = _cone_samples(rng, axis, aperture, sample_count)
    eta = _cone_samples(rng, axis, aperture, sample_count)
    keep = _norm(xi - eta) > 1e-9
    xi, eta = xi[keep], eta[keep]
    best = np.inf
    for x in np.linspace(-0.8, 0.8, 5)[:, None] * np.ones(phase.shape.total):
        d = phase.grad_x(x, xi) - phase.grad_x(x, eta)
        ratio = _norm(d) / _norm(xi - eta)
        best = min(best, float(ratio.min()))
    return ConeSeparationReport(best, aperture, best >= min_ratio)
