"""Angular decomposition: sphere nets, cone cutoffs, and influence regions.

A net at level s on the unit sphere of a block has pairwise spacing about
2^{-s/2} and at most C 2^{s (N_i - 1)/2} points.  Normalized bumps over
the net give a degree-zero partition of unity chi_s^nu subordinate to the
cones |xi/|xi| - xi_nu| <= 2 * 2^{-s/2}.

The dual objects in physical space are curved rectangles: at level s and
direction nu, a point x belongs to the rectangle centered at x_o when

    |x_o - grad_xi Phi(x, nu)| <= C_R 2^{-s/2}   and
    |<x_o - grad_xi Phi(x, nu), nu>| <= C_R 2^{-s},

(the dual orientation swaps x and x_o).  The union over directions and
levels 2^{-s} <= delta is the region of influence of the ball B_delta: the
complement is where kernel mass estimates take over.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dyadic import smooth_step
from .grid import GridSpec, ProductSpaceShape
from .spheres import circle_points, fibonacci_points

__all__ = [
    "SphericalNet",
    "build_net",
    "net_min_spacing",
    "net_covering_radius",
    "chi_weights",
    "chi_cutoff",
    "partition_check",
    "chi_derivative_fit",
    "axis_cutoff",
    "cone_multiplier",
    "rectangle_membership",
    "InfluenceRegion",
    "region_of_influence",
    "corrected_phase",
    "adapted_frame",
    "corrected_phase_decay",
]


@dataclass(frozen=True)
class SphericalNet:
    """Level-s point net on the unit sphere of an N_i-dimensional block."""

    dim: int
    level: int
    points: np.ndarray

    @property
    def spacing(self) -> float:
        return 2.0 ** (-self.level / 2.0)

    @property
    def count(self) -> int:
        return len(self.points)


def build_net(dim: int, level: int) -> SphericalNet:
    """Net with pairwise spacing ~ 2^{-level/2} and covering radius < 2 * spacing.

    dim = 2 uses equally spaced circle points; dim = 3 thins a Fibonacci
    lattice (oversampled 2x) greedily to minimum spacing 0.8 * target.
    Both are deterministic in (dim, level).
    """
    if dim < 2:
        raise ValueError("nets only exist on blocks of dimension >= 2")
    if level < 1:
        raise ValueError("level must be a positive integer")
    gamma = 2.0 ** (-level / 2.0)
    if dim == 2:
        count = math.ceil(2.0 * np.pi / gamma)
        return SphericalNet(dim, level, circle_points(count))
    if dim == 3:
        dense = fibonacci_points(math.ceil(2.0 * 4.0 * np.pi / gamma ** 2))
        keep = [0]
        min_d2 = np.sum((dense - dense[0]) ** 2, axis=-1)
        thr = (0.8 * gamma) ** 2
        for k in range(1, len(dense)):
            if min_d2[k] >= thr:
                keep.append(k)
                min_d2 = np.minimum(min_d2, np.sum((dense - dense[k]) ** 2, axis=-1))
        return SphericalNet(dim, level, dense[keep])
    raise ValueError(f"unsupported block dimension {dim}")


def net_min_spacing(net: SphericalNet) -> float:
    d2 = np.sum((net.points[:, None, :] - net.points[None, :, :]) ** 2, axis=-1)
    d2[np.diag_indices(net.count)] = np.inf
    return float(np.sqrt(d2.min()))


def net_covering_radius(net: SphericalNet, probe_count: int = 4096, seed: int = 5) -> float:
    """Monte-Carlo estimate of max distance from the sphere to the net."""
    rng = np.random.default_rng(seed)
    p = rng.normal(size=(probe_count, net.dim))
    p /= np.linalg.norm(p, axis=-1, keepdims=True)
    d2 = np.sum((p[:, None, :] - net.points[None, :, :]) ** 2, axis=-1)
    return float(np.sqrt(d2.min(axis=1).max()))


def chi_weights(net: SphericalNet, xi_block) -> np.ndarray:
    """All cutoff values chi_nu(xi), stacked along the first axis.

    chi_nu is the bump psi0(2^{s/2} |xi/|xi| - nu|) normalized by the sum
    over the net, so the family sums to one at every nonzero xi by
    construction and each piece vanishes outside its cone.
    """
    xi = np.asarray(xi_block, dtype=float)
    r = np.linalg.norm(xi, axis=-1)
    if np.any(r == 0):
        raise ValueError("cone cutoffs are undefined at xi = 0")
    d = xi / r[..., None]
    scale = 2.0 ** (net.level / 2.0)
    raw = smooth_step(scale * np.linalg.norm(
        d[None, ...] - net.points[(slice(None),) + (None,) * (d.ndim - 1)], axis=-1))
    total = raw.sum(axis=0)
    if np.any(total <= 0):
        raise ValueError("net does not cover the sphere at this level")
    return raw / total


def chi_cutoff(net: SphericalNet, index: int, xi_block) -> np.ndarray:
    """Single partition member chi_nu; degree-zero homogeneous in xi."""
    return chi_weights(net, xi_block)[index]


def partition_check(net: SphericalNet, probe_count: int = 2048, seed: int = 3) -> float:
    """max |sum_nu chi_nu - 1| over random directions and radii."""
    rng = np.random.default_rng(seed)
    xi = rng.normal(size=(probe_count, net.dim))
    xi *= (rng.uniform(0.5, 64.0, size=probe_count)
           / np.linalg.norm(xi, axis=-1))[:, None]
    total = chi_weights(net, xi).sum(axis=0)
    return float(np.abs(total - 1.0).max())


def chi_derivative_fit(net: SphericalNet, index: int = 0, max_order: int = 2,
                       radii=(1.0, 4.0), probe_count: int = 64, seed: int = 9) -> dict:
    """Fit A_alpha in |d^alpha chi_nu| <= A_alpha 2^{|alpha| s/2} |xi|^{-|alpha|}.

    Finite differences at probes spread over the cone of nu; steps scale
    with 2^{-s/2} |xi| (the angular variation scale).
    """
    rng = np.random.default_rng(seed)
    nu = net.points[index]
    u = rng.normal(size=(probe_count, net.dim))
    u -= (u @ nu)[:, None] * nu
    u *= (rng.uniform(0.0, 1.8, probe_count) * net.spacing
          / np.maximum(np.linalg.norm(u, axis=-1), 1e-12))[:, None]
    dirs = nu + u
    dirs /= np.linalg.norm(dirs, axis=-1, keepdims=True)

    fitted = {}
    for order in range(1, max_order + 1):
        best = 0.0
        for r in radii:
            step = 0.02 * net.spacing * r
            for axis in range(net.dim):
                e = np.zeros(net.dim)
                e[axis] = step
                pts = r * dirs
                if order == 1:
                    d = (chi_cutoff(net, index, pts + e)
                         - chi_cutoff(net, index, pts - e)) / (2 * step)
                else:
                    d = (chi_cutoff(net, index, pts + e) - 2 * chi_cutoff(net, index, pts)
                         + chi_cutoff(net, index, pts - e)) / step ** 2
                weight = 2.0 ** (order * net.level / 2.0) * r ** (-order)
                best = max(best, float(np.abs(d).max()) / weight)
        fitted[order] = best
    return fitted


def axis_cutoff(shape: ProductSpaceShape, xi) -> np.ndarray:
    """psi(xi) = 1 - prod_i (1 - psi0(2 |xi^i|)).

    Equals 1 whenever some block satisfies |xi^i| <= 1/2 and vanishes once
    every block has |xi^i| >= 1: a collar around the coordinate subspaces.
    """
    xi = np.asarray(xi, dtype=float)
    prod = 1.0
    for sl in shape.block_slices:
        r = np.linalg.norm(xi[..., sl], axis=-1)
        prod = prod * (1.0 - smooth_step(2.0 * r))
    return 1.0 - prod


def cone_multiplier(shape: ProductSpaceShape, nets: dict, nu: dict, xi,
                    complement: bool = False) -> np.ndarray:
    """prod_{i in U} chi_{nu_i}(xi^i) times (1 - psi) (or psi for the complement).

    ``nets``/``nu`` map block indices in U (blocks with N_i >= 2) to their
    net and chosen direction index.  Values at lattice points with some
    xi^i = 0 are set to zero: the axis collar owns that set anyway.
    """
    xi = np.asarray(xi, dtype=float)
    out = np.ones(xi.shape[:-1])
    for i, sl in enumerate(shape.block_slices):
        if i not in nets:
            continue
        blk = xi[..., sl]
        r = np.linalg.norm(blk, axis=-1)
        mask = r > 0
        vals = np.zeros_like(out)
        if mask.any():
            vals[mask] = chi_cutoff(nets[i], nu[i], blk[mask])
        out = out * vals
    psi = axis_cutoff(shape, xi)
    return out * (psi if complement else (1.0 - psi))


def rectangle_membership(factor, level: int, direction: np.ndarray, x_block,
                         center_block, C_R: float = 4.0,
                         orientation: str = "forward") -> np.ndarray:
    """Boolean membership of x in the rectangle R (or *R) at (level, direction)."""
    nu = np.asarray(direction, dtype=float)
    x = np.asarray(x_block, dtype=float)
    c = np.asarray(center_block, dtype=float)
    if orientation == "forward":
        v = c - factor.grad_xi(x, np.broadcast_to(nu, x.shape))
    elif orientation == "dual":
        v = x - factor.grad_xi(np.broadcast_to(c, x.shape), np.broadcast_to(nu, x.shape))
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    full = np.linalg.norm(v, axis=-1) <= C_R * 2.0 ** (-level / 2.0)
    axial = np.abs(np.sum(v * nu, axis=-1)) <= C_R * 2.0 ** (-level)
    return full & axial


@dataclass
class InfluenceRegion:
    """Union of rectangles attached to B_delta(center), per block in U."""

    center: np.ndarray
    delta: float
    orientation: str
    C_R: float
    levels: tuple[int, ...]
    members: tuple  # (block index, level, direction index)


def _membership_any(phase, shape, x_pts_by_block, center, orientation,
                    C_R, levels, collect_members: bool = False):
    """Per-block union masks over the given per-block point sets."""
    masks = {}
    members = []
    for i, sl in enumerate(shape.block_slices):
        dim = shape.dims[i]
        if dim < 2:
            continue  # one-dimensional blocks contribute no rectangles
        pts = x_pts_by_block[i]
        mask = np.zeros(pts.shape[:-1], dtype=bool)
        cblk = center[sl]
        for s in levels:
            net = build_net(dim, s)
            for k, nu in enumerate(net.points):
                hit = rectangle_membership(phase.factors[i], s, nu, pts, cblk,
                                           C_R=C_R, orientation=orientation)
                if collect_members and hit.any():
                    members.append((i, s, k))
                mask |= hit
        masks[i] = mask
    return masks, members


def region_of_influence(grid: GridSpec, phase, center, delta: float,
                        orientation: str = "forward", C_R: float = 4.0,
                        extra_levels: int = 4, mc_samples: int = 20000,
                        seed: int = 17):
    """Indicator of the influence region on the grid plus a measure estimate.

    Levels run from ceil(log2(1/delta)) (rectangles of thickness ~ delta)
    up to ``extra_levels`` further, capped at the grid resolution; finer
    rectangles are thinner than a cell and change nothing visible.
    Returns (InfluenceRegion, boolean indicator over the grid, Monte-Carlo
    measure estimate).
    """
    if not (0 < delta < 1):
        raise ValueError("delta must lie in (0, 1)")
    shape = grid.shape
    center = np.asarray(center, dtype=float)
    s_min = max(1, math.ceil(math.log2(1.0 / delta)))
    s_res = max(s_min, int(math.floor(math.log2(2.0 / min(grid.spacing)))))
    levels = tuple(range(s_min, min(s_min + extra_levels, s_res) + 1))

    axes_of_block = [list(range(sl.start, sl.stop)) for sl in shape.block_slices]
    pts_by_block = {}
    for i, axes in enumerate(axes_of_block):
        if shape.dims[i] < 2:
            continue
        mesh = np.meshgrid(*[grid.axis(k) for k in axes], indexing="ij")
        pts_by_block[i] = np.stack(mesh, axis=-1)

    masks, members = _membership_any(phase, shape, pts_by_block, center,
                                     orientation, C_R, levels, collect_members=True)

    indicator = np.zeros(grid.samples, dtype=bool)
    for i, axes in enumerate(axes_of_block):
        if i not in masks:
            continue
        bshape = [grid.samples[k] if k in axes else 1 for k in range(shape.total)]
        indicator |= masks[i].reshape(bshape)

    rng = np.random.default_rng(seed)
    box = np.array(grid.half_width)
    draws = rng.uniform(-1.0, 1.0, size=(mc_samples, shape.total)) * box
    mc_pts = {i: draws[:, sl] for i, sl in enumerate(shape.block_slices)
              if shape.dims[i] >= 2}
    mc_masks, _ = _membership_any(phase, shape, mc_pts, center,
                                  orientation, C_R, levels)
    inside = np.zeros(mc_samples, dtype=bool)
    for m in mc_masks.values():
        inside |= m
    volume = float(np.prod(2.0 * box))
    region = InfluenceRegion(center, delta, orientation, C_R, levels, tuple(members))
    return region, indicator, float(inside.mean()) * volume


def corrected_phase(factor, x_block, xi_block, star_direction) -> np.ndarray:
    """phi(x, xi) = Phi(x, xi) - grad_xi Phi(x, xi*) . xi.

    Subtracting the linearization at the cone axis xi* leaves a remainder
    that is flat along the axis: identically zero for linear factors and
    |xi| - xi* . xi for half-wave factors.
    """
    x = np.asarray(x_block, dtype=float)
    xi = np.asarray(xi_block, dtype=float)
    star = np.asarray(star_direction, dtype=float)
    star = star / np.linalg.norm(star)
    lin = np.sum(factor.grad_xi(x, np.broadcast_to(star, xi.shape)) * xi, axis=-1)
    return factor.eval(x, xi) - lin


def adapted_frame(direction: np.ndarray) -> np.ndarray:
    """Orthonormal rows with row 0 = direction (tau axis, then eta axes)."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    dim = d.shape[0]
    basis = np.eye(dim)
    cols = [d]
    for e in basis:
        v = e - sum((e @ c) * c for c in cols)
        nv = np.linalg.norm(v)
        if nv > 1e-10:
            cols.append(v / nv)
        if len(cols) == dim:
            break
    return np.stack(cols, axis=0)


def corrected_phase_decay(factor, star_direction, level: int, max_order: int = 2,
                          probe_count: int = 48, seed: int = 31) -> dict:
    """Max |d^N_tau phi| and |d^N_eta phi| over the cone at scale 2^level.

    tau is the coordinate along the cone axis, eta the transverse block;
    probes live in the cone of half-angle ~ 2^{-level/2} intersected with
    |xi| ~ 2^level.  Expected decay: 2^{-N level} along tau and
    2^{-N level / 2} along eta, which the caller fits across levels.
    """
    rng = np.random.default_rng(seed)
    dim = factor.dim
    frame = adapted_frame(star_direction)
    star = frame[0]
    u = rng.normal(size=(probe_count, dim))
    u -= (u @ star)[:, None] * star
    norm = np.maximum(np.linalg.norm(u, axis=-1), 1e-12)
    u *= (rng.uniform(0.0, 1.6, probe_count) * 2.0 ** (-level / 2.0) / norm)[:, None]
    dirs = star + u
    dirs /= np.linalg.norm(dirs, axis=-1, keepdims=True)
    radii = 2.0 ** level * rng.uniform(0.55, 1.8, probe_count)
    pts = radii[:, None] * dirs
    x_samples = np.linspace(-0.8, 0.8, 3)[:, None] * np.ones(dim)

    def phi(p, x):
        return corrected_phase(factor, x, p, star)

    out = {}
    for order in range(1, max_order + 1):
        h_tau = 0.01 * 2.0 ** level
        best_tau = 0.0
        best_eta = 0.0
        for x in x_samples:
            e = star * h_tau
            if order == 1:
                d = (phi(pts + e, x) - phi(pts - e, x)) / (2 * h_tau)
            else:
                d = (phi(pts + e, x) - 2 * phi(pts, x) + phi(pts - e, x)) / h_tau ** 2
            best_tau = max(best_tau, float(np.abs(d).max()))
            h_eta = 0.01 * 2.0 ** (level / 2.0)
            for eta_axis in frame[1:]:
                e = eta_axis * h_eta
                if order == 1:
                    d = (phi(pts + e, x) - phi(pts - e, x)) / (2 * h_eta)
                else:
                    d = (phi(pts + e, x) - 2 * phi(pts, x) + phi(pts - e, x)) / h_eta ** 2
                best_eta = max(best_eta, float(np.abs(d).max()))
        out[("tau", order)] = best_tau
        out[("eta", order)] = best_eta
    return out
