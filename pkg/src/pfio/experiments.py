"""Quadrature experiments behind every decay and mapping claim.

Each experiment measures a quantity the estimates control (kernel masses,
tail integrals, norm ratios, atom images) over a sweep, and reports either
a least-squares slope in log2 coordinates or a boundedness window.
Residuals are always carried along; nothing is fitted silently.

Scaling claims are never tested as absolute constants. The constants are
not computable from the statements, so a claim "A(j) <= C B(j)" turns into
"log2 A - log2 B has slope ~ 0 and bounded spread across the sweep".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .angular import region_of_influence
from .dyadic import DyadicTuple, delta_t, shell_profile, smooth_step
from .grid import GridSpec, SampledField, inverse_transform, lp_norm
from .operators import FioSpec, apply_adjoint, apply_fio

__all__ = [
    "DecayFitReport",
    "fit_decay",
    "dyadic_sup_envelope",
    "ball_volume",
    "Atom",
    "make_atom",
    "atom_ensemble",
    "shell_bump_ensemble",
    "random_band_limited",
    "EnsembleConfig",
    "probe_ensemble",
    "NormEstimate",
    "power_iteration_norm",
    "empirical_operator_norm",
    "delta_probe",
    "kernel_slice",
    "kernel_mass",
    "MassSweepReport",
    "verify_kernel_mass",
    "LipschitzRow",
    "verify_kernel_lipschitz",
    "TailReport",
    "verify_tail_bound",
    "AtomImageReport",
    "atom_image_bound",
    "cancellation_ablation",
    "admissible_p_interval",
    "mapping_exponents",
    "focusing_probe",
    "sharpness_experiment",
    "fractional_mapping_ratios",
    "multiplier_kernel_decay",
    "omega_sharp_decay",
    "omega_flat_decay",
    "max_norm_ratio",
]


# ---------------------------------------------------------------------------
# fits

@dataclass
class DecayFitReport:
    """Least-squares line through (abscissa, log2 measured) pairs."""

    abscissae: tuple[float, ...]
    ordinates: tuple[float, ...]
    slope: float
    intercept: float
    residual: float  # RMS deviation from the fitted line, log2 units


def fit_decay(abscissae, ordinates) -> DecayFitReport:
    xs = np.asarray(abscissae, dtype=float)
    ys = np.asarray(ordinates, dtype=float)
    if xs.size < 2:
        raise ValueError("a slope fit needs at least two samples")
    slope, intercept = np.polyfit(xs, ys, 1)
    resid = ys - (slope * xs + intercept)
    return DecayFitReport(tuple(xs), tuple(ys), float(slope), float(intercept),
                          float(np.sqrt(np.mean(resid ** 2))))


def dyadic_sup_envelope(r_values, magnitudes):
    """Sup of |measurement| per dyadic bin [2^k, 2^{k+1}).

    Transforms of compactly supported windows have infinitely many real
    zeros; pointwise log fits land in the notches, the envelope does not.
    Returns (geometric bin centers, sups), bins with no samples dropped.
    """
    r = np.asarray(r_values, dtype=float)
    m = np.asarray(magnitudes, dtype=float)
    if np.any(r <= 0):
        raise ValueError("bin abscissae must be positive")
    ks = np.floor(np.log2(r)).astype(int)
    centers, sups = [], []
    for k in sorted(set(ks.tolist())):
        sel = ks == k
        centers.append(2.0 ** (k + 0.5))
        sups.append(float(m[sel].max()))
    return np.array(centers), np.array(sups)


# ---------------------------------------------------------------------------
# atoms and probe ensembles

_UNIT_BALL = {1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}


def ball_volume(dim: int, radius: float) -> float:
    if dim not in _UNIT_BALL:
        raise ValueError("ball volumes tabulated for dimensions 1..3 only")
    return _UNIT_BALL[dim] * radius ** dim


@dataclass
class Atom:
    """Mean-zero bump pair supported in B(center, radius), sup = |B|^{-1}."""

    center: np.ndarray
    radius: float
    field: SampledField

    def norm(self, p: float) -> float:
        return lp_norm(self.field, p)


def make_atom(grid: GridSpec, center, radius: float) -> Atom:
    """Difference of two concentric bumps, exactly mean-free on the lattice."""
    center = np.asarray(center, dtype=float)
    if radius < 4.0 * max(grid.spacing):
        raise ValueError("atom radius must span at least 4 grid cells")
    r = np.linalg.norm(grid.points() - center, axis=-1)
    outer = _radial_bump(r / radius)
    inner = _radial_bump(r / (0.95 * radius))
    a = outer - (outer.sum() / inner.sum()) * inner
    a /= np.abs(a).max() * ball_volume(grid.shape.total, radius)
    return Atom(center, radius, SampledField(grid, a.astype(complex), "physical"))


def _radial_bump(r):
    out = np.zeros_like(r)
    mask = r < 1.0
    out[mask] = np.exp(1.0 - 1.0 / (1.0 - r[mask] ** 2))
    return out


def atom_ensemble(grid: GridSpec, count: int = 16, seed: int = 11,
                  radii=None) -> list[Atom]:
    """Seeded atoms with dyadic radii and lattice-snapped centers."""
    rng = np.random.default_rng(seed)
    hmax = max(grid.spacing)
    if radii is None:
        r_top = min(grid.half_width) / 4.0
        radii = [r_top * 2.0 ** (-k % 4) for k in range(count)]
    atoms = []
    for k in range(count):
        radius = radii[k % len(radii)]
        if radius < 4.0 * hmax:
            radius = 4.0 * hmax
        box = np.array([hw / 2.0 - radius for hw in grid.half_width])
        center = rng.uniform(-1.0, 1.0, size=grid.shape.total) * np.maximum(box, 0.0)
        center = np.array([grid.axis(i)[grid.index_of(center)[i]]
                           for i in range(grid.shape.total)])
        atoms.append(make_atom(grid, center, radius))
    return atoms


def shell_bump_ensemble(grid: GridSpec, count: int = 8) -> list[SampledField]:
    """Frequency-shell probes: inverse transforms of the dyadic multipliers."""
    pts = grid.points("frequency")
    j_top = max(2, int(math.floor(math.log2(0.5 * min(grid.nyquist)))))
    fields = []
    for k in range(count):
        j = 1 + k % j_top
        tup = DyadicTuple(tuple([j] * grid.shape.n), rho=0.0)
        prof = delta_t(tup, grid.shape, pts)
        fields.append(inverse_transform(SampledField(grid, prof.astype(complex),
                                                     "frequency")))
    return fields


def random_band_limited(grid: GridSpec, count: int = 8, seed: int = 29,
                        band_fraction: float = 0.5) -> list[SampledField]:
    """Seeded complex-Gaussian fields, smoothly confined below the roll-off."""
    rng = np.random.default_rng(seed)
    pts = grid.points("frequency")
    envelope = smooth_step(np.linalg.norm(pts, axis=-1)
                           / (0.5 * band_fraction * min(grid.nyquist)))
    fields = []
    for _ in range(count):
        z = rng.standard_normal(grid.samples) + 1j * rng.standard_normal(grid.samples)
        fields.append(inverse_transform(SampledField(grid, z * envelope, "frequency")))
    return fields


@dataclass(frozen=True)
class EnsembleConfig:
    atoms: int = 16
    bumps: int = 8
    fields: int = 8
    seed: int = 11


def probe_ensemble(grid: GridSpec, cfg: EnsembleConfig = EnsembleConfig()) -> list[SampledField]:
    probes = [a.field for a in atom_ensemble(grid, cfg.atoms, cfg.seed)]
    probes += shell_bump_ensemble(grid, cfg.bumps)
    probes += random_band_limited(grid, cfg.fields, cfg.seed + 1)
    return probes


# ---------------------------------------------------------------------------
# operator norms

@dataclass
class NormEstimate:
    p: float
    ensemble_size: int
    value: float
    method: str
    history: tuple[float, ...] = field(default_factory=tuple)


def power_iteration_norm(spec: FioSpec, iterations: int = 50, tol: float = 1e-10,
                         seed: int = 23, start: SampledField | None = None) -> NormEstimate:
    """sqrt of the top eigenvalue of F*F by plain power iteration.

    The history of successive ratios ||Av_k|| / ||v_k|| is nondecreasing
    (Cauchy-Schwarz on the spectral measure), so the last entry is the
    best certified lower bound on ||F||^2.
    """
    if start is None:
        start = random_band_limited(spec.grid, count=1, seed=seed)[0]
    v = start.values / lp_norm(start, 2)
    history = []
    prev = 0.0
    for _ in range(iterations):
        w = apply_adjoint(spec, apply_fio(spec, start.copy_with(v)))
        ratio = lp_norm(w, 2)  # ||A v|| with ||v|| = 1
        history.append(math.sqrt(ratio))
        if ratio == 0.0:
            break
        v = w.values / ratio
        if abs(ratio - prev) <= tol * max(ratio, 1.0):
            break
        prev = ratio
    return NormEstimate(2.0, 1, history[-1] if history else 0.0,
                        "power_iteration", tuple(history))


def max_norm_ratio(spec: FioSpec, p: float, probes,
                   orientation: str = "forward") -> tuple[float, list[float]]:
    """Max of ||Ff||_p / ||f||_p; ratios stay index-aligned with probes."""
    apply = apply_fio if orientation == "forward" else apply_adjoint
    ratios = []
    for f in probes:
        denom = lp_norm(f, p)
        if denom == 0.0:
            ratios.append(0.0)
            continue
        ratios.append(lp_norm(apply(spec, f), p) / denom)
    return (max(ratios) if ratios else 0.0), ratios


def empirical_operator_norm(spec: FioSpec, p: float,
                            cfg: EnsembleConfig = EnsembleConfig()) -> NormEstimate:
    """p = 2: power iteration (seeded by the best ensemble probe); else
    the max ratio ||Ff||_p / ||f||_p over the probe ensemble."""
    probes = probe_ensemble(spec.grid, cfg)
    best, ratios = max_norm_ratio(spec, p, probes)
    if p != 2.0:
        return NormEstimate(p, len(ratios), best, "ensemble_max", tuple(ratios))
    idx = int(np.argmax(ratios))
    est = power_iteration_norm(spec, start=probes[idx])
    # the iteration refines the best probe; keep whichever bound is larger
    return NormEstimate(2.0, len(ratios), max(est.value, best),
                        "power_iteration", est.history)


# ---------------------------------------------------------------------------
# kernel slices along x for a pinned y

def delta_probe(grid: GridSpec, index: tuple[int, ...]) -> SampledField:
    """Unit lattice mass at ``index``: transforms to e^{-2 pi i y.xi}."""
    v = np.zeros(grid.samples, dtype=complex)
    v[index] = 1.0 / grid.cell_volume
    return SampledField(grid, v, "physical")


def kernel_slice(spec: FioSpec, tup: DyadicTuple, y) -> SampledField:
    """Omega_t(., y) over the x-grid: F applied to a point mass at y."""
    pts = spec.grid.points("frequency")
    mult = delta_t(tup, spec.grid.shape, pts)
    probe = delta_probe(spec.grid, spec.grid.index_of(np.asarray(y, dtype=float)))
    return apply_fio(spec, probe, extra_multiplier=mult)


def kernel_mass(spec: FioSpec, tup: DyadicTuple, y) -> float:
    """int |Omega_t(x, y)| dx by x-grid quadrature."""
    return lp_norm(kernel_slice(spec, tup, y), 1)


def _predicted_exponent(tup: DyadicTuple, dims: tuple[int, ...]) -> float:
    j = max(tup.t)
    return sum((ti - j) * (Ni - 1) / 2.0 for ti, Ni in zip(tup.t, dims))


@dataclass
class MassSweepReport:
    tuples: tuple
    masses: tuple[float, ...]
    predicted: tuple[float, ...]  # log2 of the claimed envelope per tuple
    fit: DecayFitReport | None

    @property
    def spread(self) -> float:
        """max/min of mass over claimed envelope across the sweep."""
        ratios = [m / 2.0 ** p for m, p in zip(self.masses, self.predicted)]
        return max(ratios) / min(ratios)


def verify_kernel_mass(spec: FioSpec, tuples, y=None) -> MassSweepReport:
    """Kernel masses across a tuple sweep against the product envelope.

    The claimed envelope is prod_i 2^{(t_i - j)(N_i - 1)/2} with j = max t_i;
    when the sweep actually varies that exponent the report carries a slope
    fit of log2 mass against it, otherwise boundedness is the whole claim.
    """
    if y is None:
        y = np.zeros(spec.grid.shape.total)
    dims = spec.grid.shape.dims
    masses = [kernel_mass(spec, tup, y) for tup in tuples]
    predicted = [_predicted_exponent(tup, dims) for tup in tuples]
    fit = None
    if len(set(predicted)) >= 2:
        fit = fit_decay(predicted, np.log2(masses))
    return MassSweepReport(tuple(tuples), tuple(masses), tuple(predicted), fit)


@dataclass
class LipschitzRow:
    j: int
    distance: float
    diff_mass: float

    @property
    def ratio(self) -> float:
        return self.diff_mass / (2.0 ** self.j * self.distance)


def verify_kernel_lipschitz(spec: FioSpec, j_values, fractions=(0.25, 0.5),
                            y=None, axis: int = 0) -> list[LipschitzRow]:
    """Mass of Omega_j(x, y) - Omega_j(x, z) against 2^j |y - z|.

    Displacements are lattice-snapped; the measured distance (not the
    requested one) enters the ratio. Requested |y - z| = fraction * 2^{-j}.
    """
    if y is None:
        y = np.zeros(spec.grid.shape.total)
    y = np.asarray(y, dtype=float)
    h = spec.grid.spacing[axis]
    rows = []
    for j in j_values:
        tup = DyadicTuple(tuple([j] * spec.grid.shape.n), rho=0.0)
        for frac in fractions:
            steps = max(1, round(frac * 2.0 ** (-j) / h))
            z = y.copy()
            z[axis] += steps * h
            probe_y = delta_probe(spec.grid, spec.grid.index_of(y))
            probe_z = delta_probe(spec.grid, spec.grid.index_of(z))
            pair = probe_y.copy_with(probe_y.values - probe_z.values)
            pts = spec.grid.points("frequency")
            diff = apply_fio(spec, pair, extra_multiplier=delta_t(tup, spec.grid.shape, pts))
            rows.append(LipschitzRow(j, steps * h, lp_norm(diff, 1)))
    return rows


@dataclass
class TailReport:
    delta: float
    j_values: tuple[int, ...]
    tails: tuple[float, ...]
    products: tuple[float, ...]  # tail * 2^j * delta, the claimed-flat quantity
    skipped: tuple[tuple[int, str], ...]
    region_measure: float
    fit: DecayFitReport | None


def verify_tail_bound(spec: FioSpec, j_values, delta: float, center=None,
                      C_R: float = 4.0, extra_levels: int = 4) -> TailReport:
    """Mass of Omega_j(., y) outside the influence region of B(y, delta).

    Levels j with 2^j <= 1/delta are reported as skipped: below that
    threshold the kernel does not resolve the ball and the claim is vacuous.
    """
    if center is None:
        center = np.zeros(spec.grid.shape.total)
    _, indicator, _ = region_of_influence(spec.grid, spec.phase, center, delta,
                                          orientation="forward", C_R=C_R,
                                          extra_levels=extra_levels)
    outside = ~indicator
    measure = float(indicator.sum()) * spec.grid.cell_volume
    kept_j, tails, skipped = [], [], []
    for j in j_values:
        if 2.0 ** j <= 1.0 / delta:
            skipped.append((j, "precondition 2^j > 1/delta"))
            continue
        tup = DyadicTuple(tuple([j] * spec.grid.shape.n), rho=0.0)
        sl = kernel_slice(spec, tup, center)
        tails.append(float(np.sum(np.abs(sl.values)[outside])) * spec.grid.cell_volume)
        kept_j.append(j)
    fit = fit_decay(kept_j, np.log2(tails)) if len(kept_j) >= 2 else None
    products = tuple(t * 2.0 ** j * delta for j, t in zip(kept_j, tails))
    return TailReport(delta, tuple(kept_j), tuple(tails), products,
                      tuple(skipped), measure, fit)


# ---------------------------------------------------------------------------
# atom images

@dataclass
class AtomImageReport:
    delta: float
    orientation: str
    total: float              # int |Fa| over the whole grid
    region_integral: float    # part over the influence region
    cs_bound: float           # |region|^{1/2} ||Fa||_2, dominates region_integral
    complement_integral: float
    region_measure: float


def atom_image_bound(spec: FioSpec, atom: Atom, orientation: str = "forward",
                     C_R: float = 4.0, extra_levels: int = 4) -> AtomImageReport:
    """Split int |Fa| into influence-region and complement parts.

    The region part is dominated by |region|^{1/2} ||Fa||_2 (discrete
    Cauchy-Schwarz, reported alongside); the complement part is where the
    kernel tail estimate does the work.
    """
    if orientation == "forward":
        image = apply_fio(spec, atom.field)
    elif orientation == "dual":
        image = apply_adjoint(spec, atom.field)
    else:
        raise ValueError("orientation must be 'forward' or 'dual'")
    _, indicator, _ = region_of_influence(spec.grid, spec.phase, atom.center,
                                          atom.radius, orientation=orientation,
                                          C_R=C_R, extra_levels=extra_levels)
    cv = spec.grid.cell_volume
    absim = np.abs(image.values)
    total = float(absim.sum()) * cv
    region_part = float(absim[indicator].sum()) * cv
    measure = float(indicator.sum()) * cv
    cs = math.sqrt(measure) * lp_norm(image, 2)
    return AtomImageReport(atom.radius, orientation, total, region_part, cs,
                           total - region_part, measure)


def cancellation_ablation(spec: FioSpec, atom: Atom, j_cut: int = 2) -> tuple[float, float]:
    """Low-frequency image mass for the atom vs its modulus.

    Dropping the mean-zero structure re-creates a nonzero average, and the
    low-pass part of the image inflates; the returned pair is
    (mass for a, mass for |a|), the second strictly larger in practice.
    """
    pts = spec.grid.points("frequency")
    low = smooth_step(np.linalg.norm(pts, axis=-1) / 2.0 ** j_cut)
    mass_atom = lp_norm(apply_fio(spec, atom.field, extra_multiplier=low), 1)
    stripped = atom.field.copy_with(np.abs(atom.field.values).astype(complex))
    mass_abs = lp_norm(apply_fio(spec, stripped, extra_multiplier=low), 1)
    return mass_atom, mass_abs


# ---------------------------------------------------------------------------
# exponent arithmetic

def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(str(v))  # decimal literals stay exact ('-0.4' -> -2/5)


def admissible_p_interval(m, N: int, n: int) -> tuple[Fraction, Fraction]:
    """Closed exponent interval from |1/2 - 1/p| <= -m/(N - n), exact."""
    m = _as_fraction(m)
    if N <= n:
        raise ValueError("the interval needs N > n")
    if not (-Fraction(N - n, 2) < m <= 0):
        raise ValueError("order must satisfy -(N - n)/2 < m <= 0")
    half = Fraction(1, 2)
    w = -m / (N - n)
    lo_inv, hi_inv = half + w, half - w  # bounds on 1/p
    p_max = Fraction(1, 1) / hi_inv if hi_inv > 0 else None
    if p_max is None:
        raise ValueError("order at the endpoint leaves the interval unbounded")
    return (Fraction(1, 1) / lo_inv, p_max)


def mapping_exponents(m, N: int) -> tuple[Fraction, Fraction]:
    """(p, q) with 1/p = 1/2 - m/N and 1/q = 1/2 + m/N, for m in (-N/2, 0)."""
    m = _as_fraction(m)
    if not (-Fraction(N, 2) < m < 0):
        raise ValueError("order must lie strictly in (-N/2, 0)")
    half = Fraction(1, 2)
    return (Fraction(1, 1) / (half - Fraction(m, N)),
            Fraction(1, 1) / (half + Fraction(m, N)))


# ---------------------------------------------------------------------------
# sharpness sweep

def focusing_probe(spec: FioSpec, j: int) -> SampledField:
    """Shell probe with the phase's own frequency offset unwound.

    fhat_j(xi) = phi(2^{-j} xi) e^{-2 pi i offset(xi)} refocuses the image
    at the origin: these are the extremal inputs for the exponent range,
    where plain shell probes only show decay.
    """
    pts = spec.grid.points("frequency")
    prof = shell_profile(np.linalg.norm(pts, axis=-1) * 2.0 ** (-j))
    vals = prof * np.exp(-2j * np.pi * spec.phase.freq_offset(pts))
    return inverse_transform(SampledField(spec.grid, vals, "frequency"))


def sharpness_experiment(spec: FioSpec, p_values, j_values) -> dict[float, DecayFitReport]:
    """Norm-ratio growth ||Ff_j||_p / ||f_j||_p across frequency levels.

    Slope ~ 0 inside the admissible exponent range, strictly positive
    outside: the numerical signature of sharpness.
    """
    ratios = {p: [] for p in p_values}
    for j in j_values:
        f = focusing_probe(spec, j)
        image = apply_fio(spec, f)
        for p in p_values:
            ratios[p].append(lp_norm(image, p) / lp_norm(f, p))
    return {p: fit_decay(j_values, np.log2(ratios[p])) for p in p_values}


# ---------------------------------------------------------------------------
# fractional-order mapping ratios and multiplier kernels

def fractional_mapping_ratios(spec: FioSpec, atoms, p: float, q: float):
    """Per-atom ratios ||Fa||_2 / ||a||_p and ||Fa||_q / ||a||_2."""
    rows = []
    for atom in atoms:
        image = apply_fio(spec, atom.field)
        rows.append((atom.radius,
                     lp_norm(image, 2) / atom.norm(p),
                     lp_norm(image, q) / atom.norm(2)))
    return rows


def multiplier_kernel_decay(grid: GridSpec, order: float,
                            r_range=(None, 0.5)) -> DecayFitReport:
    """Envelope decay of the kernel of (1 + |xi|^2)^{m/2} against |x|.

    The claimed size is |x|^{-N-m} near the origin; the fit runs over the
    dyadic sup envelope between 4 cells and half the box.
    """
    pts = grid.points("frequency")
    knee = 0.8 * min(grid.nyquist)
    mult = ((1.0 + np.sum(pts ** 2, axis=-1)) ** (order / 2.0)
            * smooth_step(np.linalg.norm(pts, axis=-1) / knee))
    kern = inverse_transform(SampledField(grid, mult.astype(complex), "frequency"))
    r = np.linalg.norm(grid.points(), axis=-1).reshape(-1)
    mag = np.abs(kern.values).reshape(-1)
    lo = r_range[0] if r_range[0] is not None else 4.0 * max(grid.spacing)
    sel = (r >= lo) & (r <= r_range[1])
    centers, sups = dyadic_sup_envelope(r[sel], mag[sel])
    return fit_decay(np.log2(centers), np.log2(sups))


# ---------------------------------------------------------------------------
# pairing kernels of F*F and FF*

def omega_sharp_decay(spec: FioSpec, base, direction, r_values) -> DecayFitReport:
    """|Omega#(xi, xi + r d)| against log2(1 + r), sup-binned.

    Omega# is the frequency-side pairing kernel; inside a narrow cone it
    decays faster than any power of the separation.
    """
    from .operators import kernel_omega_sharp

    base = np.asarray(base, dtype=float)
    direction = np.asarray(direction, dtype=float)
    mags = [abs(kernel_omega_sharp(spec, base, base + r * direction))
            for r in r_values]
    centers, sups = dyadic_sup_envelope(r_values, mags)
    return fit_decay(np.log2(1.0 + centers), np.log2(sups))


def omega_flat_decay(spec: FioSpec, base, direction, r_values) -> DecayFitReport:
    """|Omega_b(x, x + r d)| against log2(1 + r), sup-binned (space side)."""
    from .operators import kernel_omega_flat

    base = np.asarray(base, dtype=float)
    direction = np.asarray(direction, dtype=float)
    mags = [abs(kernel_omega_flat(spec, base, base + r * direction))
            for r in r_values]
    centers, sups = dyadic_sup_envelope(r_values, mags)
    return fit_decay(np.log2(1.0 + centers), np.log2(sups))
