"""Non-isotropic Littlewood-Paley decomposition on product spaces.

For a decay parameter rho in [0, 1) set q = 1/rho (q = inf at rho = 0).
A dyadic tuple t = (t_1, ..., t_n) of positive integers acts on frequency
space through n dilations: the i-th dilation scales block i by 2^{-t_i}
and every other block by 2^{-q t_i}.  The cutoff

    delta_t(xi) = prod_i phi(t_i-dilation of xi)

is built from a single smooth shell phi supported in 1/2 <= |xi| <= 2.
At rho = 0 the dilations kill the other blocks and delta_t collapses to a
product of per-block dyadic shells; for rho > 0 the pieces overlap and
only a quantitative support description survives:

* hypothesis (H): some t_i > (2 + 2 log2 n) / (q - 1);
* the index split (I, J) produced by ``partition_index_sets`` satisfies
  the two pairwise conditions checked by
  ``partition_satisfies_support_conditions``, and on supp delta_t the
  blocks obey |xi^i| ~ 2^{t_i} for i in I, |xi^j| <~ 2^{t_j} and
  |xi^imax| ~ 2^{q t_j} for j in J, with slack exponent c = 2 + log2 n.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .grid import GridSpec, ProductSpaceShape, SampledField, forward_transform, inverse_transform

__all__ = [
    "smooth_step",
    "shell_profile",
    "bump_phi",
    "Mollifier",
    "DyadicTuple",
    "IndexPartition",
    "nonisotropic_dilate",
    "delta_t",
    "delta_t_s",
    "hypothesis_threshold",
    "check_hypothesis_H",
    "slack_constant",
    "partition_index_sets",
    "partition_satisfies_support_conditions",
    "brute_force_partitions",
    "verify_support_lemma",
    "verify_composite_symbol_bound",
    "partial_sum_apply",
    "enumerate_tuples",
    "low_frequency_remainder",
    "t_max_for_grid",
    "SupportLemmaReport",
]


def _g(u):
    out = np.zeros_like(u)
    pos = u > 0
    with np.errstate(divide="ignore", over="ignore"):
        out[pos] = np.exp(-1.0 / u[pos])
    return out


def smooth_step(r):
    """psi0(r): 1 for r <= 1, 0 for r >= 2, smooth monotone bridge between.

    Bridge g(2-r) / (g(2-r) + g(r-1)) with g(u) = exp(-1/u); the two branch
    values are attained exactly, so telescoping sums cancel to rounding.
    """
    r = np.asarray(r, dtype=float)
    out = np.zeros(r.shape)
    out[r <= 1.0] = 1.0
    mid = (r > 1.0) & (r < 2.0)
    if mid.any():
        u = r[mid]
        hi, lo = _g(2.0 - u), _g(u - 1.0)
        out[mid] = hi / (hi + lo)
    return out if out.ndim else float(out)


def shell_profile(r):
    """phi as a function of the radius: psi0(r) - psi0(2r), supported on [1/2, 2]."""
    r = np.asarray(r, dtype=float)
    return smooth_step(r) - smooth_step(2.0 * r)


def bump_phi(xi):
    """Shell bump phi(xi) = psi0(|xi|) - psi0(2|xi|) on R^K for any K."""
    return shell_profile(np.linalg.norm(np.asarray(xi, dtype=float), axis=-1))


@dataclass(frozen=True)
class Mollifier:
    """The fixed pair (psi0, phi) every decomposition in this package uses."""

    base: Callable = smooth_step
    shell: Callable = bump_phi


@dataclass(frozen=True)
class DyadicTuple:
    """Tuple of dyadic levels together with the decay parameter rho."""

    t: tuple[int, ...]
    rho: float = 0.0

    def __post_init__(self):
        if len(self.t) < 1 or any(int(v) != v or v < 1 for v in self.t):
            raise ValueError(f"levels must be positive integers, got {self.t}")
        if not (0.0 <= self.rho < 1.0):
            raise ValueError(f"rho must lie in [0, 1), got {self.rho}")
        object.__setattr__(self, "t", tuple(int(v) for v in self.t))

    @property
    def n(self) -> int:
        return len(self.t)

    @property
    def q(self) -> float:
        return math.inf if self.rho == 0.0 else 1.0 / self.rho


@dataclass(frozen=True)
class IndexPartition:
    """Split {0..n-1} = I (comparable blocks) + J (dominated blocks)."""

    I: frozenset
    J: frozenset
    imax: int


def nonisotropic_dilate(tup: DyadicTuple, shape: ProductSpaceShape, i: int, xi):
    """Apply the i-th dilation: block i shrinks by 2^{-t_i}, others by 2^{-q t_i}."""
    xi = np.asarray(xi, dtype=float)
    out = np.empty_like(xi)
    for k, sl in enumerate(shape.block_slices):
        e = float(tup.t[i]) if k == i else tup.q * tup.t[i]
        out[..., sl] = xi[..., sl] * 2.0 ** (-e)
    return out


def delta_t(tup: DyadicTuple, shape: ProductSpaceShape, xi):
    """delta_t(xi) = prod_i phi(i-th dilation of xi), vectorized over (..., N)."""
    xi = np.asarray(xi, dtype=float)
    out = 1.0
    for i in range(tup.n):
        out = out * bump_phi(nonisotropic_dilate(tup, shape, i, xi))
    return out


def delta_t_s(tup: DyadicTuple, s: tuple[int, ...], shape: ProductSpaceShape, xi):
    """delta_{t,s}(xi) = delta_t(xi) prod_i phi(2^{-s_i} xi^i) (per-block shells).

    Nonzero values force 2^{s_i - 1} <= |xi^i| <= 2^{s_i + 1}; the factor is
    identically zero unless s_i <= t_i + O(1) levels intersect the support
    of delta_t.
    """
    if len(s) != tup.n or any(int(v) != v or v < 1 for v in s):
        raise ValueError(f"s must be a tuple of {tup.n} positive integers, got {s}")
    xi = np.asarray(xi, dtype=float)
    out = delta_t(tup, shape, xi)
    for si, sl in zip(s, shape.block_slices):
        out = out * shell_profile(np.linalg.norm(xi[..., sl], axis=-1) * 2.0 ** (-si))
    return out


def hypothesis_threshold(q: float, n: int) -> float:
    """Levels above (2 + 2 log2 n)/(q - 1) activate the support lemma; 0 at q = inf."""
    if math.isinf(q):
        return 0.0
    return (2.0 + 2.0 * math.log2(n)) / (q - 1.0)


def check_hypothesis_H(tup: DyadicTuple) -> bool:
    """True when some t_i strictly exceeds the threshold (always true at rho = 0)."""
    thr = hypothesis_threshold(tup.q, tup.n)
    return any(ti > thr for ti in tup.t)


def slack_constant(n: int) -> float:
    """Exponent slack c = 2 + log2 n used throughout the support estimates."""
    return 2.0 + math.log2(n)


def partition_index_sets(tup: DyadicTuple) -> IndexPartition:
    """Construct the index split (I, J) for a tuple satisfying hypothesis (H).

    Sort t ascending; k is the least sorted position whose level satisfies
    max(t) < q t_(k) - c with c = 2 + log2 n.  I collects positions k..n of
    the sorted order, J the rest; imax is the index realizing max over I.
    """
    t, q, n = tup.t, tup.q, tup.n
    c = slack_constant(n)
    order = sorted(range(n), key=lambda i: t[i])
    tmax = t[order[-1]]
    k = None
    for pos in range(n):
        bound = math.inf if math.isinf(q) else q * t[order[pos]] - c
        if tmax < bound:
            k = pos
            break
    if k is None:
        raise ValueError(
            "no admissible split exists; the tuple violates the dilation hypothesis")
    return IndexPartition(frozenset(order[k:]), frozenset(order[:k]), order[-1])


def partition_satisfies_support_conditions(t: tuple[int, ...], q: float,
                                           I, J) -> bool:
    """Literal check of the two pairwise support conditions for a split (I, J).

    (a) for all i1, i2 in I: (t_i1 + c)/q < t_i2 < q t_i1 - c;
    (b) for all j in J: q t_j - c <= max_{i in I} t_i;
    with c = 2 + log2 n.  Used as the brute-force oracle for
    ``partition_index_sets``.
    """
    I, J = set(I), set(J)
    n = len(t)
    if I | J != set(range(n)) or I & J or not I:
        return False
    c = slack_constant(n)
    for i1 in I:
        upper = math.inf if math.isinf(q) else q * t[i1] - c
        lower = 0.0 if math.isinf(q) else (t[i1] + c) / q
        for i2 in I:
            if not (lower < t[i2] < upper):
                return False
    timax = max(t[i] for i in I)
    for j in J:
        lhs = math.inf if math.isinf(q) else q * t[j] - c
        if not (lhs <= timax):
            return False
    return True


def brute_force_partitions(t: tuple[int, ...], q: float) -> list[tuple[frozenset, frozenset]]:
    """All splits (I, J) of {0..n-1} passing the support conditions."""
    n = len(t)
    found = []
    for bits in itertools.product((0, 1), repeat=n):
        I = frozenset(i for i in range(n) if bits[i])
        J = frozenset(i for i in range(n) if not bits[i])
        if partition_satisfies_support_conditions(t, q, I, J):
            found.append((I, J))
    return found


@dataclass
class SupportLemmaReport:
    partition: IndexPartition
    samples: int
    violations: int

    @property
    def passed(self) -> bool:
        return self.samples > 0 and self.violations == 0


def _support_samples(tup: DyadicTuple, shape: ProductSpaceShape, count: int,
                     rng: np.random.Generator, cutoff: float = 1e-12,
                     max_rounds: int = 200) -> np.ndarray:
    """Rejection-sample points with delta_t > cutoff inside the bounding box."""
    N = shape.total
    box = np.empty(N)
    for i, sl in enumerate(shape.block_slices):
        box[sl] = 2.0 ** (tup.t[i] + 1)
    kept: list[np.ndarray] = []
    have = 0
    for _ in range(max_rounds):
        draw = rng.uniform(-1.0, 1.0, size=(4 * count, N)) * box
        hit = draw[delta_t(tup, shape, draw) > cutoff]
        kept.append(hit)
        have += len(hit)
        if have >= count:
            break
    if have == 0:
        return np.zeros((0, N))
    return np.concatenate(kept, axis=0)[:count]


def verify_support_lemma(tup: DyadicTuple, shape: ProductSpaceShape,
                         probe_count: int = 256, seed: int = 101) -> SupportLemmaReport:
    """Sample supp delta_t and count violations of the block-size description.

    Every sample must satisfy, with c = 2 + log2 n and the split (I, J):
    2^{t_i - c} <= |xi^i| <= 2^{t_i + c} for i in I; |xi^j| <= 2^{t_j + c}
    and 2^{q t_j - c} <= |xi^imax| <= 2^{q t_j + c} for j in J.
    """
    if not check_hypothesis_H(tup):
        raise ValueError("support lemma requires the dilation hypothesis")
    part = partition_index_sets(tup)
    rng = np.random.default_rng(seed)
    pts = _support_samples(tup, shape, probe_count, rng)
    c = slack_constant(tup.n)
    violations = 0
    for xi in pts:
        norms = [np.linalg.norm(xi[sl]) for sl in shape.block_slices]
        ok = True
        for i in part.I:
            ok &= 2.0 ** (tup.t[i] - c) <= norms[i] <= 2.0 ** (tup.t[i] + c)
        for j in part.J:
            ok &= norms[j] <= 2.0 ** (tup.t[j] + c)
            if not math.isinf(tup.q):
                lo = 2.0 ** (tup.q * tup.t[j] - c)
                hi = 2.0 ** (tup.q * tup.t[j] + c)
                ok &= lo <= norms[part.imax] <= hi
        violations += 0 if ok else 1
    return SupportLemmaReport(part, len(pts), violations)


def verify_composite_symbol_bound(tup: DyadicTuple, shape: ProductSpaceShape, sym,
                                  max_order: int = 2, probe_count: int = 32,
                                  seed: int = 103) -> dict:
    """Fit A_alpha in |d_xi^alpha (delta_t sigma)| <= A_alpha prod_i 2^{-t_i |alpha^i|}.

    Central differences with per-block steps proportional to 2^{t_i} (the
    scale on which delta_t varies).  Returns {alpha: fitted constant}.
    """
    rng = np.random.default_rng(seed)
    pts = _support_samples(tup, shape, probe_count, rng)
    N = shape.total
    steps = np.empty(N)
    block_of = np.empty(N, dtype=int)
    for i, sl in enumerate(shape.block_slices):
        steps[sl] = 1e-3 * 2.0 ** tup.t[i]
        block_of[sl] = i

    def composite(xi, x):
        return delta_t(tup, shape, xi) * sym.eval(x, xi)

    def fd(xi, x, alpha):
        order = [k for k in range(N) for _ in range(alpha[k])]
        if not order:
            return composite(xi, x)
        k, rest = order[0], alpha[:k] + (alpha[k] - 1,) + alpha[k + 1:]
        e = np.zeros(N)
        e[k] = steps[k]
        return (fd(xi + e, x, rest) - fd(xi - e, x, rest)) / (2 * steps[k])

    x_samples = np.linspace(-0.4, 0.4, 3)[:, None] * np.ones(N)
    fitted = {}
    for alpha in itertools.product(range(max_order + 1), repeat=N):
        if not 0 < sum(alpha) <= max_order:
            continue
        scale = 1.0
        for k in range(N):
            scale *= 2.0 ** (tup.t[block_of[k]] * alpha[k])
        best = 0.0
        for xi in pts:
            for x in x_samples:
                best = max(best, abs(fd(xi, x, alpha)) * scale)
        fitted[alpha] = best
    return fitted


def partial_sum_apply(tup: DyadicTuple, f: SampledField) -> SampledField:
    """Frequency-side multiplication by delta_t: the partial-sum operator."""
    shape = f.grid.shape
    fhat = forward_transform(f)
    mult = delta_t(tup, shape, f.grid.points("frequency"))
    return inverse_transform(fhat.copy_with(mult * fhat.values))


def enumerate_tuples(n: int, t_max: int, rho: float,
                     require_hypothesis: bool = True) -> Iterator[DyadicTuple]:
    """All tuples in {1..t_max}^n, optionally filtered by hypothesis (H)."""
    for t in itertools.product(range(1, t_max + 1), repeat=n):
        tup = DyadicTuple(t, rho)
        if require_hypothesis and not check_hypothesis_H(tup):
            continue
        yield tup


def low_frequency_remainder(shape: ProductSpaceShape, rho: float, t_max: int, xi):
    """1 - sum of delta_t over all hypothesis-(H) tuples with levels <= t_max.

    At rho = 0 the sum telescopes per block and the remainder vanishes once
    every 2 <= |xi^i| <= 2^{t_max}; for rho > 0 the overlapping pieces make
    the remainder a measured quantity rather than an identity.
    """
    xi = np.asarray(xi, dtype=float)
    acc = np.zeros(xi.shape[:-1])
    for tup in enumerate_tuples(shape.n, t_max, rho):
        acc = acc + delta_t(tup, shape, xi)
    return 1.0 - acc


def t_max_for_grid(grid: GridSpec) -> int:
    """Largest T with 2^{T+1} below the grid's Nyquist frequency."""
    return int(math.floor(math.log2(min(grid.nyquist)))) - 1
