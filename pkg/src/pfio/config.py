"""Run configuration: strict keys, documented defaults, canonical JSON.

A config is a JSON object mirroring the dataclasses below. Every key is
optional (defaults fill in), every unknown key is fatal, and every
violation is reported with its full path. ``canonical_json`` serializes
with all defaults materialized, so the string embedded in result CSVs
parses back to the exact same configuration.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import types
import typing
from dataclasses import dataclass, field

import numpy as np

from .grid import GridSpec, ProductSpaceShape, make_grid
from .phases import (PhaseFactor, ProductPhase, half_wave_factor, linear_factor,
                     perturbed_factor, translation_factor)
from .symbols import (SymbolSpec, cone_localized_symbol, constant_symbol,
                      product_symbol, separable_symbol)

__all__ = [
    "ConfigError",
    "RunConfig",
    "parse_config",
    "validate_config",
    "canonical_json",
    "config_hash",
    "build_grid",
    "build_phase",
    "build_symbol",
]


class ConfigError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class SpaceConfig:
    dims: tuple[int, ...] = (2,)


@dataclass(frozen=True)
class GridConfig:
    samples: tuple[int, ...] = (256,)     # per axis; a single entry broadcasts
    half_width: tuple[float, ...] = (1.5,)


@dataclass(frozen=True)
class PhaseConfig:
    kind: str = "half_wave"               # linear | translation | half_wave | perturbed
    sign: int = 1
    shift: tuple[float, ...] | None = None
    epsilon: float = 0.1
    bump_radius: float = 1.0


@dataclass(frozen=True)
class SymbolConfig:
    kind: str = "separable"               # separable | product | cone | constant
    order: float = -0.5
    rho: float = 0.0
    support_radius: float = 1.25
    orders: tuple[float, ...] | None = None   # product kind, one per block
    axis: tuple[float, ...] | None = None     # cone kind
    aperture: float = 0.2


@dataclass(frozen=True)
class DecompositionConfig:
    t_max: int | None = None              # None: capped by the grid band
    s_extra: int = 4
    c_r: float = 4.0
    seed: int = 7


@dataclass(frozen=True)
class EnsembleSection:
    atoms: int = 16
    bumps: int = 8
    fields: int = 8
    seed: int = 11


@dataclass(frozen=True)
class SharpnessSection:
    order: float = -0.25
    p_values: tuple[float, ...] = (2.0, 4.0, 8.0)
    j_values: tuple[int, ...] = (3, 4, 5, 6, 7)


@dataclass(frozen=True)
class FractionalSection:
    order: float = -0.4
    deltas: tuple[float, ...] = (0.25, 0.125, 0.0625, 0.03125)


@dataclass(frozen=True)
class PdoSection:
    samples: tuple[int, ...] = (96, 192)  # per-axis counts, one run each
    p_values: tuple[float, ...] = (4.0 / 3.0, 2.0, 4.0)


@dataclass(frozen=True)
class RoiSection:
    raster_samples: int = 128
    delta: float = 0.125
    orientation: str = "forward"


@dataclass(frozen=True)
class OmegaSharpSection:
    base_magnitude: float = 48.0
    r_max: float = 32.0
    samples_per_octave: int = 40
    grid_samples: int = 512
    support_radius: float = 1.45
    x_smoothness: int = 1
    aperture: float = 0.2


@dataclass(frozen=True)
class ExperimentConfig:
    j_values: tuple[int, ...] = (3, 4, 5, 6, 7)
    delta: float = 0.125
    lipschitz_fractions: tuple[float, ...] = (0.25, 0.5)
    atom_deltas: tuple[float, ...] = (0.25, 0.125, 0.0625, 0.03125)
    ensemble: EnsembleSection = field(default_factory=EnsembleSection)
    sharpness: SharpnessSection = field(default_factory=SharpnessSection)
    fractional: FractionalSection = field(default_factory=FractionalSection)
    pdo: PdoSection = field(default_factory=PdoSection)
    roi: RoiSection = field(default_factory=RoiSection)
    omega_sharp: OmegaSharpSection = field(default_factory=OmegaSharpSection)


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "runs"


@dataclass(frozen=True)
class RunConfig:
    space: SpaceConfig = field(default_factory=SpaceConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    phase: PhaseConfig = field(default_factory=PhaseConfig)
    symbol: SymbolConfig = field(default_factory=SymbolConfig)
    decomposition: DecompositionConfig = field(default_factory=DecompositionConfig)
    experiment: ExperimentConfig = field(default_factory=ExperimentConfig)
    output: OutputConfig = field(default_factory=OutputConfig)


_SECTION_TYPES = {
    SpaceConfig, GridConfig, PhaseConfig, SymbolConfig, DecompositionConfig,
    EnsembleSection, SharpnessSection, FractionalSection, PdoSection,
    RoiSection, OmegaSharpSection, ExperimentConfig, OutputConfig, RunConfig,
}


def _coerce_scalar(value, target, path, errors):
    if target is int:
        if isinstance(value, bool) or not isinstance(value, int):
            errors.append(f"{path}: expected an integer, got {value!r}")
            return None
        return value
    if target is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            errors.append(f"{path}: expected a number, got {value!r}")
            return None
        return float(value)
    if target is str:
        if not isinstance(value, str):
            errors.append(f"{path}: expected a string, got {value!r}")
            return None
        return value
    raise AssertionError(f"unhandled scalar type {target}")


def _coerce(value, ftype, path, errors):
    origin = typing.get_origin(ftype)
    args = typing.get_args(ftype)
    if origin in (typing.Union, types.UnionType):  # optional fields: "X | None"
        if value is None:
            return None
        inner = [a for a in args if a is not type(None)]
        return _coerce(value, inner[0], path, errors)
    if ftype in (int, float, str):
        return _coerce_scalar(value, ftype, path, errors)
    if origin is tuple:  # accepts a bare scalar as a one-entry list
        elem = args[0]
        if not isinstance(value, (list, tuple)):
            value = [value]
        out = []
        for k, v in enumerate(value):
            c = _coerce_scalar(v, elem, f"{path}[{k}]", errors)
            if c is not None:
                out.append(c)
        return tuple(out)
    raise AssertionError(f"unhandled field type {ftype} at {path}")


def _build_section(cls, data, path, errors):
    if not isinstance(data, dict):
        errors.append(f"{path or 'config'}: expected an object")
        return cls()
    fields = {f.name: f for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in data.items():
        if key not in fields:
            errors.append(f"{path + '.' if path else ''}{key}: unknown key")
            continue
        f = fields[key]
        sub = f.default_factory() if f.default_factory is not dataclasses.MISSING else None
        here = f"{path + '.' if path else ''}{key}"
        if type(sub) in _SECTION_TYPES:
            kwargs[key] = _build_section(type(sub), value, here, errors)
        else:
            kwargs[key] = _coerce(value, _FIELD_TYPES[cls][key], here, errors)
    return cls(**{k: v for k, v in kwargs.items() if v is not None or _allows_none(cls, k)})


def _allows_none(cls, name):
    return "None" in str(_FIELD_TYPES[cls][name])


# resolve annotations once; dataclasses store them as strings under
# `from __future__ import annotations`
_FIELD_TYPES = {cls: typing.get_type_hints(cls) for cls in _SECTION_TYPES}

_PHASE_KINDS = ("linear", "translation", "half_wave", "perturbed")
_SYMBOL_KINDS = ("separable", "product", "cone", "constant")


def _cross_checks(cfg: RunConfig, errors: list):
    dims = cfg.space.dims
    if not dims or any(d < 1 or d > 3 for d in dims):
        errors.append("space.dims: each block dimension must be 1, 2 or 3")
        return
    total = sum(dims)
    for name, vals in (("grid.samples", cfg.grid.samples),
                       ("grid.half_width", cfg.grid.half_width)):
        if len(vals) not in (1, total):
            errors.append(f"{name}: expected 1 or {total} entries, got {len(vals)}")
    if any(m < 8 or m % 2 for m in cfg.grid.samples):
        errors.append("grid.samples: counts must be even and at least 8")
    if any(h <= 0 for h in cfg.grid.half_width):
        errors.append("grid.half_width: must be positive")
    if cfg.phase.kind not in _PHASE_KINDS:
        errors.append(f"phase.kind: must be one of {_PHASE_KINDS}")
    if cfg.phase.sign not in (1, -1):
        errors.append("phase.sign: must be 1 or -1")
    if cfg.phase.kind == "perturbed" and not (0 < cfg.phase.epsilon < 0.3):
        errors.append("phase.epsilon: must lie in (0, 0.3)")
    if cfg.phase.kind == "translation":
        if cfg.phase.shift is None or len(cfg.phase.shift) != total:
            errors.append(f"phase.shift: translation phases need {total} entries")
    if cfg.symbol.kind not in _SYMBOL_KINDS:
        errors.append(f"symbol.kind: must be one of {_SYMBOL_KINDS}")
    if cfg.symbol.order > 0:
        errors.append("symbol.order: must satisfy m <= 0")
    if not (0.0 <= cfg.symbol.rho < 1.0):
        errors.append("symbol.rho: must lie in [0, 1)")
    elif cfg.symbol.rho > 0.0 and cfg.symbol.kind != "separable":
        errors.append("symbol.rho: only the separable kind supports rho > 0")
    if cfg.symbol.support_radius <= 0:
        errors.append("symbol.support_radius: must be positive")
    if cfg.symbol.kind == "product":
        if cfg.symbol.orders is not None and len(cfg.symbol.orders) != len(dims):
            errors.append(f"symbol.orders: expected {len(dims)} entries")
        if cfg.symbol.orders is not None and any(m > 0 for m in cfg.symbol.orders):
            errors.append("symbol.orders: every entry must satisfy m <= 0")
    if cfg.symbol.kind == "cone" and cfg.symbol.axis is not None \
            and len(cfg.symbol.axis) != total:
        errors.append(f"symbol.axis: expected {total} entries")
    if cfg.decomposition.t_max is not None and cfg.decomposition.t_max < 1:
        errors.append("decomposition.t_max: must be a positive level")
    if not (0.0 < cfg.experiment.delta < 1.0):
        errors.append("experiment.delta: must lie in (0, 1)")
    if any(j < 1 for j in cfg.experiment.j_values):
        errors.append("experiment.j_values: levels must be positive")
    if cfg.experiment.roi.orientation not in ("forward", "dual"):
        errors.append("experiment.roi.orientation: must be 'forward' or 'dual'")
    if cfg.experiment.sharpness.order > 0:
        errors.append("experiment.sharpness.order: must satisfy m <= 0")
    if not (-total / 2 < cfg.experiment.fractional.order < 0):
        errors.append("experiment.fractional.order: must lie in (-N/2, 0)")
    osec = cfg.experiment.omega_sharp
    if osec.grid_samples < 8 or osec.grid_samples % 2:
        errors.append("experiment.omega_sharp.grid_samples: must be even and at least 8")
    if osec.support_radius <= 0:
        errors.append("experiment.omega_sharp.support_radius: must be positive")
    if osec.x_smoothness < 1:
        errors.append("experiment.omega_sharp.x_smoothness: must be at least 1")
    if not (0.0 < osec.aperture < 1.0):
        errors.append("experiment.omega_sharp.aperture: must lie in (0, 1)")


def validate_config(data: dict) -> RunConfig:
    errors: list[str] = []
    cfg = _build_section(RunConfig, data, "", errors)
    if not errors:
        _cross_checks(cfg, errors)
    if errors:
        raise ConfigError(errors)
    return cfg


def parse_config(path: str) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError([f"{path}: not valid JSON ({exc})"]) from exc
    return validate_config(data)


def canonical_json(cfg: RunConfig) -> str:
    """Config with all defaults materialized, stable key order, no spaces."""
    return json.dumps(dataclasses.asdict(cfg), sort_keys=True,
                      separators=(",", ":"))


def config_hash(cfg: RunConfig) -> str:
    return hashlib.sha256(canonical_json(cfg).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------------------
# object builders

def build_grid(cfg: RunConfig) -> GridSpec:
    shape = ProductSpaceShape(cfg.space.dims)
    samples = cfg.grid.samples if len(cfg.grid.samples) > 1 else cfg.grid.samples[0]
    half = cfg.grid.half_width if len(cfg.grid.half_width) > 1 else cfg.grid.half_width[0]
    return make_grid(shape, samples, half)


def _factor(cfg: RunConfig, dim: int, offset: int) -> PhaseFactor:
    kind = cfg.phase.kind
    if kind == "linear":
        return linear_factor(dim)
    if kind == "translation":
        block = cfg.phase.shift[offset:offset + dim]
        return translation_factor(dim, block)
    if kind == "half_wave":
        return half_wave_factor(dim, sign=cfg.phase.sign)
    return perturbed_factor(dim, cfg.phase.epsilon, cfg.phase.bump_radius)


def build_phase(cfg: RunConfig) -> ProductPhase:
    factors, offset = [], 0
    for d in cfg.space.dims:
        factors.append(_factor(cfg, d, offset))
        offset += d
    return ProductPhase(tuple(factors))


def build_symbol(cfg: RunConfig) -> SymbolSpec:
    shape = ProductSpaceShape(cfg.space.dims)
    s = cfg.symbol
    if s.kind == "separable":
        return separable_symbol(shape, s.order, s.support_radius, rho=s.rho)
    if s.kind == "product":
        orders = s.orders if s.orders is not None else tuple([s.order] * shape.n)
        return product_symbol(shape, orders, s.support_radius)
    if s.kind == "cone":
        axis = np.asarray(s.axis if s.axis is not None
                          else [1.0] + [0.0] * (shape.total - 1))
        return cone_localized_symbol(shape, s.order, axis, s.aperture,
                                     s.support_radius)
    return constant_symbol(shape)
