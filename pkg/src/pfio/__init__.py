"""Desk-scale numerics for oscillatory integral operators on product spaces.

The package builds Fourier integral operators with product phases on
centered grids, decomposes frequency space dyadically and angularly, and
runs quadrature experiments against the kernel-decay, atom, and norm
estimates that govern such operators.
"""

__version__ = "0.1.0"

from .grid import (GridError, GridSpec, ProductSpaceShape, SampledField,
                   forward_transform, inverse_transform, lp_norm, make_grid)
from .phases import (PhaseFactor, ProductPhase, SingularFrequencyError,
                     half_wave_factor, linear_factor, perturbed_factor,
                     translation_factor)
from .symbols import (SymbolSpec, cone_localized_symbol, constant_symbol,
                      product_symbol, separable_symbol)
from .dyadic import (DyadicTuple, IndexPartition, Mollifier, bump_phi,
                     check_hypothesis_H, delta_t, delta_t_s,
                     enumerate_tuples, partition_index_sets, shell_profile,
                     smooth_step, t_max_for_grid)
from .angular import (InfluenceRegion, SphericalNet, axis_cutoff, build_net,
                      chi_cutoff, cone_multiplier, region_of_influence)
from .operators import (FioSpec, SampledKernel, analytic_family_apply,
                        apply_adjoint, apply_fio, kernel_omega_flat,
                        kernel_omega_sharp, kernel_omega_t, kernel_omega_t_s_nu)
from .experiments import (Atom, DecayFitReport, EnsembleConfig, NormEstimate,
                          admissible_p_interval, atom_image_bound,
                          empirical_operator_norm, make_atom,
                          mapping_exponents, power_iteration_norm,
                          sharpness_experiment)
from .config import RunConfig, parse_config, validate_config

__all__ = [name for name in dir() if not name.startswith("_")]
