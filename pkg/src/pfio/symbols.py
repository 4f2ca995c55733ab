"""Symbols on product spaces and empirical symbol-class checks.

A symbol sigma(x, xi) of order m and decay parameter rho in [0, 1) is
expected to satisfy, per multi-indices alpha (frequency, split per block)
and beta (space),

    |d_xi^alpha d_x^beta sigma|
        <= A * prod_i (1 + |xi^i| + |xi|^rho)^{-|alpha^i|}
             * (1 + |xi|)^{m + rho |beta|}.

``verify_class_membership`` probes this with finite differences and
reports the fitted constant per (alpha, beta); ``verify_marcinkiewicz``
checks the scale-invariant variant |(xi d/dxi)^alpha sigma| <= A for
order-zero symbols.  Both are measurements, not proofs: a "pass" means
every fitted constant is finite, below the declared cap, and stable when
the probe set is refined.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grid import ProductSpaceShape

__all__ = [
    "SymbolSpec",
    "bump_profile",
    "window_amplitude",
    "separable_symbol",
    "product_symbol",
    "cone_localized_symbol",
    "constant_symbol",
    "oscillating_violator",
    "verify_class_membership",
    "verify_marcinkiewicz",
    "ClassMembershipReport",
    "MarcinkiewiczReport",
]


def bump_profile(r):
    """Standard smooth bump b(r) = exp(1 - 1/(1 - r^2)) for |r| < 1, else 0."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r)
    inside = np.abs(r) < 1.0
    with np.errstate(divide="ignore", over="ignore"):
        u = 1.0 - r[inside] ** 2
        out[inside] = np.exp(1.0 - 1.0 / u)
    return out if out.ndim else float(out)


def window_amplitude(shape: ProductSpaceShape, support_radius: float) -> Callable:
    """a(x) = prod_i b(|x^i| / R): smooth, one near 0, zero once any block leaves |x^i| < R."""

    def a(x):
        x = np.asarray(x, dtype=float)
        out = 1.0
        for blk in shape.split(x):
            out = out * bump_profile(np.linalg.norm(blk, axis=-1) / support_radius)
        return out

    return a


@dataclass(frozen=True)
class SymbolSpec:
    """A sampled symbol with its declared class parameters.

    ``eval`` broadcasts over leading dimensions: x and xi both (..., N).
    ``x_part``/``xi_part`` are set when sigma(x, xi) = x_part(x) * xi_part(xi);
    separable symbols admit one-FFT operator applications.
    """

    shape: ProductSpaceShape
    eval: Callable
    order: float
    rho: float
    x_support_radius: float
    kind: str = "custom"
    x_part: Callable | None = None
    xi_part: Callable | None = None

    def __post_init__(self):
        if self.order > 0:
            raise ValueError(f"symbol order must satisfy m <= 0, got {self.order}")
        if not (0.0 <= self.rho < 1.0):
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")

    @property
    def separable(self) -> bool:
        return self.x_part is not None and self.xi_part is not None


def _from_parts(shape, order, rho, support_radius, kind, x_part, xi_part) -> SymbolSpec:
    def ev(x, xi):
        return x_part(np.asarray(x, dtype=float)) * xi_part(np.asarray(xi, dtype=float))

    return SymbolSpec(shape, ev, order, rho, support_radius, kind, x_part, xi_part)


def separable_symbol(shape: ProductSpaceShape, order: float,
                     support_radius: float = 1.0, rho: float = 0.0) -> SymbolSpec:
    """sigma(x, xi) = a(x) (1 + |xi|^2)^{m/2} with the standard window a."""
    a = window_amplitude(shape, support_radius)

    def w(xi):
        return (1.0 + np.sum(np.asarray(xi, dtype=float) ** 2, axis=-1)) ** (order / 2.0)

    radius = support_radius * np.sqrt(shape.n)
    return _from_parts(shape, order, rho, radius, "separable", a, w)


def product_symbol(shape: ProductSpaceShape, orders: tuple[float, ...],
                   support_radius: float = 1.0) -> SymbolSpec:
    """rho = 0 product symbol a(x) prod_i (1 + |xi^i|^2)^{m_i/2}, m = sum m_i."""
    if len(orders) != shape.n:
        raise ValueError(f"need one per-factor order for each of {shape.n} factors")
    a = window_amplitude(shape, support_radius)

    def w(xi):
        xi = np.asarray(xi, dtype=float)
        out = 1.0
        for mi, blk in zip(orders, shape.split(xi)):
            out = out * (1.0 + np.sum(blk ** 2, axis=-1)) ** (mi / 2.0)
        return out

    radius = support_radius * np.sqrt(shape.n)
    return _from_parts(shape, float(sum(orders)), 0.0, radius, "product_rho0", a, w)


def spline_profile(r, smoothness: int):
    """(1 - r^2)_+^k: a C^{k-1} window with power-law transform tails.

    The infinitely smooth bump transforms faster than any power, which no
    straight line in log-log coordinates can track; boundary smoothness k
    pins the tail exponent instead.
    """
    r = np.asarray(r, dtype=float)
    return np.clip(1.0 - r * r, 0.0, None) ** smoothness


def spline_window_amplitude(shape: ProductSpaceShape, support_radius: float,
                            smoothness: int) -> Callable:
    """Per-block spline windows, same layout as ``window_amplitude``."""
    def a(x):
        x = np.asarray(x, dtype=float)
        out = 1.0
        for sl in shape.block_slices:
            out = out * spline_profile(
                np.linalg.norm(x[..., sl], axis=-1) / support_radius, smoothness)
        return out
    return a


def cone_localized_symbol(shape: ProductSpaceShape, order: float, axis: np.ndarray,
                          aperture: float = 0.2, support_radius: float = 1.0,
                          x_smoothness: int | None = None) -> SymbolSpec:
    """Separable symbol damped outside the cone around ``axis`` of the given aperture.

    The angular factor is b(|xi/|xi| - axis| / (2 aperture)) so the symbol is
    supported where the direction stays within 2*aperture of the axis and is
    identically a(x) w(|xi|) along the axis itself. ``x_smoothness`` swaps the
    spatial window for a C^{k-1} spline, giving the pairing kernel a power-law
    envelope that log-log fits can resolve.
    """
    base = separable_symbol(shape, order, support_radius)
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    x_part = base.x_part if x_smoothness is None else spline_window_amplitude(
        shape, support_radius, x_smoothness)

    def w(xi):
        xi = np.asarray(xi, dtype=float)
        r = np.linalg.norm(xi, axis=-1)
        safe = np.where(r > 0, r, 1.0)
        ang = np.linalg.norm(xi / safe[..., None] - axis, axis=-1)
        return base.xi_part(xi) * bump_profile(ang / (2.0 * aperture)) * (r > 0)

    return _from_parts(shape, order, 0.0, base.x_support_radius, "custom", x_part, w)


def constant_symbol(shape: ProductSpaceShape) -> SymbolSpec:
    """sigma = 1 (order 0, no spatial cut): the identity-phase sanity case."""

    def one(v):
        return np.ones(np.asarray(v).shape[:-1])

    return _from_parts(shape, 0.0, 0.0, np.inf, "separable", one, one)


def oscillating_violator(shape: ProductSpaceShape, support_radius: float = 1.0) -> SymbolSpec:
    """a(x) e^{2 pi i |xi|}: claims order 0 but fails the class bounds.

    Each xi-derivative brings down a factor 2 pi, with no decay in |xi|, so
    the fitted first-order constants grow like the probe radius.
    """
    a = window_amplitude(shape, support_radius)

    def w(xi):
        return np.exp(2j * np.pi * np.linalg.norm(np.asarray(xi, dtype=float), axis=-1))

    radius = support_radius * np.sqrt(shape.n)
    return _from_parts(shape, 0.0, 0.0, radius, "custom", a, w)


# ---------------------------------------------------------------------------
# finite-difference class checks
# ---------------------------------------------------------------------------

def _fd(f, x, xi, alpha, beta, shape):
    """Central finite difference d_xi^alpha d_x^beta f at (x, xi).

    Steps are scale-aware: along frequency coordinate k in block i the step
    is 1e-3 * (1 + |xi^i|); spatial steps are 1e-4.
    """
    order = [("xi", k) for k in range(len(alpha)) for _ in range(alpha[k])]
    order += [("x", k) for k in range(len(beta)) for _ in range(beta[k])]
    if not order:
        return f(x, xi)
    (which, k), rest = order[0], order[1:]
    a_rest = np.array(alpha)
    b_rest = np.array(beta)
    if which == "xi":
        a_rest[k] -= 1
        blk = next(s for s in shape.block_slices if s.start <= k < s.stop)
        h = 1e-3 * (1.0 + np.linalg.norm(xi[blk]))
        e = np.zeros_like(xi)
        e[k] = h
        hi = _fd(f, x, xi + e, tuple(a_rest), tuple(b_rest), shape)
        lo = _fd(f, x, xi - e, tuple(a_rest), tuple(b_rest), shape)
    else:
        b_rest[k] -= 1
        h = 1e-4
        e = np.zeros_like(x)
        e[k] = h
        hi = _fd(f, x + e, xi, tuple(a_rest), tuple(b_rest), shape)
        lo = _fd(f, x - e, xi, tuple(a_rest), tuple(b_rest), shape)
    return (hi - lo) / (2 * h)


def _class_weight(sym: SymbolSpec, xi: np.ndarray, alpha, beta_total: int) -> float:
    """Right-hand side of the class inequality at xi, for constant A = 1."""
    r = np.linalg.norm(xi)
    w = (1.0 + r) ** (sym.order + sym.rho * beta_total)
    for blk_slice, a_blk in zip(sym.shape.block_slices, alpha):
        ri = np.linalg.norm(xi[blk_slice])
        w *= (1.0 + ri + r ** sym.rho) ** (-a_blk)
    return w


def _block_totals(shape: ProductSpaceShape, alpha: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(int(sum(alpha[sl])) for sl in shape.block_slices)


def symbol_probes(shape: ProductSpaceShape, radii=None, directions_per_radius: int = 8,
                  near_axis: bool = True) -> np.ndarray:
    """Dyadic-radius probe frequencies, including near-axis points where the
    per-block weights are most stringent."""
    from .spheres import unit_directions

    if radii is None:
        radii = 2.0 ** np.arange(0, 8)
    N = shape.total
    dirs = []
    base = unit_directions(N, directions_per_radius) if N > 1 else np.array([[1.0], [-1.0]])
    dirs.extend(base)
    # coordinate axes always: coordinate derivatives peak there, and the sup
    # must not depend on whether the angular sample happened to include them
    for k in range(N):
        for sgn in (1.0, -1.0):
            v = np.zeros(N)
            v[k] = sgn
            dirs.append(v)
    if near_axis and shape.n > 1:
        # tilt almost entirely into one block, leaving the others small
        for i, sl in enumerate(shape.block_slices):
            v = np.full(N, 0.05 / np.sqrt(N))
            v[sl] = 1.0
            dirs.append(v / np.linalg.norm(v))
    dirs = np.asarray(dirs)
    return np.concatenate([r * dirs for r in radii], axis=0)


@dataclass
class ClassMembershipReport:
    fitted: dict
    cap: float
    stability: float
    passed: bool


@dataclass
class MarcinkiewiczReport:
    fitted: dict
    cap: float
    passed: bool


def _multi_indices(total_dim: int, max_order: int):
    for order in range(max_order + 1):
        for combo in itertools.combinations_with_replacement(range(total_dim), order):
            idx = [0] * total_dim
            for k in combo:
                idx[k] += 1
            yield tuple(idx)


def verify_class_membership(sym: SymbolSpec, max_order: int = 2, cap: float = 100.0,
                            x_samples: np.ndarray | None = None,
                            probes: np.ndarray | None = None) -> ClassMembershipReport:
    """Fit the class constants A_{alpha,beta} for |alpha| + |beta| <= max_order.

    Pass means every fitted constant is finite, at most ``cap``, and moves by
    less than 10% when the probe directions are doubled.
    """
    shape = sym.shape
    N = shape.total
    if x_samples is None:
        r = min(sym.x_support_radius, 10.0)
        x_samples = np.linspace(-0.5, 0.5, 3)[:, None] * np.ones(N) * r * 0.6
    if max_order > 3:
        raise ValueError("finite differences are only trusted to total order 3")

    def fit(probe_set):
        fitted = {}
        for alpha in _multi_indices(N, max_order):
            for beta in _multi_indices(N, max_order - sum(alpha)):
                best = 0.0
                a_blocks = _block_totals(shape, alpha)
                for xi in probe_set:
                    wt = _class_weight(sym, xi, a_blocks, sum(beta))
                    for x in x_samples:
                        d = _fd(sym.eval, np.asarray(x, float), np.asarray(xi, float),
                                alpha, beta, shape)
                        best = max(best, abs(d) / wt)
                fitted[(alpha, beta)] = best
        return fitted

    coarse = probes if probes is not None else symbol_probes(sym.shape, directions_per_radius=6)
    fine = symbol_probes(sym.shape, directions_per_radius=12)
    f_coarse, f_fine = fit(coarse), fit(fine)
    stability = 0.0
    for key, v in f_fine.items():
        base = max(f_coarse[key], 1e-12)
        stability = max(stability, abs(v - base) / base)
    worst = max(f_fine.values())
    passed = bool(np.isfinite(worst) and worst <= cap and stability <= 0.10)
    return ClassMembershipReport(f_fine, cap, stability, passed)


def verify_marcinkiewicz(sym: SymbolSpec, max_order: int = 2, cap: float = 100.0,
                         x_samples: np.ndarray | None = None,
                         probes: np.ndarray | None = None) -> MarcinkiewiczReport:
    """Fit A_alpha in |(xi d/dxi)^alpha sigma| <= A_alpha for |alpha| <= max_order.

    The scaled derivative is applied coordinatewise: each unit of alpha_k
    composes f -> xi_k * (central difference of f along xi_k).
    """
    shape = sym.shape
    N = shape.total
    if x_samples is None:
        r = min(sym.x_support_radius, 10.0)
        x_samples = np.linspace(-0.5, 0.5, 3)[:, None] * np.ones(N) * r * 0.6

    def scaled_derivative(f, k):
        def g(x, xi):
            h = 1e-3 * (1.0 + abs(xi[k]))
            e = np.zeros_like(xi)
            e[k] = h
            return xi[k] * (f(x, xi + e) - f(x, xi - e)) / (2 * h)

        return g

    probe_set = probes if probes is not None else symbol_probes(shape, directions_per_radius=6)
    fitted = {}
    for alpha in _multi_indices(N, max_order):
        f = sym.eval
        for k in range(N):
            for _ in range(alpha[k]):
                f = scaled_derivative(f, k)
        best = 0.0
        for xi in probe_set:
            for x in x_samples:
                best = max(best, abs(f(np.asarray(x, float), np.asarray(xi, float))))
        fitted[alpha] = best
    worst = max(fitted.values())
    passed = bool(np.isfinite(worst) and worst <= cap)
    return MarcinkiewiczReport(fitted, cap, passed)
