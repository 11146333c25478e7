"""Complex-time dispersive propagators on 1-D grids.

The package evaluates the oscillatory-integral solution operators

    u(t, x) = integral of  fhat(xi) e^{i t |xi|^a} e^{-sigma |xi|^a} e^{i x xi} dxi

for dispersion exponents a > 1 and damping exponents sigma >= 0 (the
``sigma = t^gamma`` choice models evolution at the complex time
``t + i t^gamma``), together with the discretised maximal fields
``sup_t |u(t, x)|``, Sobolev / L^2 / weak-L^2 norms, the frequency-bump
family that witnesses sharpness of the critical Sobolev index
``a (1 - 1/gamma)^+ / 4``, and numerical certificates (Van der Corput
bounds, kernel envelopes, convolution/domination identities) for the
kernel estimates behind those indices.

Hot grid kernels are JIT-compiled with numba when available; set
``CTDISP_NO_NUMBA=1`` to force the pure-numpy implementations.
"""

from .backends import active_backend, set_backend
from .config import RunConfig
from .counterexample import (
    CounterexampleInstance,
    blow_up_trial,
    make_bump,
    make_instance,
    optimal_time,
)
from .exponents import critical_exponent, gamma_critical, local_critical_exponent
from .grids import (
    EvolutionParams,
    FrequencyGrid,
    FrequencyProfile,
    SpatialField,
    SpatialGrid,
    TimeLadder,
)
from .kernel_oracle import (
    KernelProbeParams,
    RegionSplit,
    envelope_l1_estimate,
    h_eps_derivative_bounds,
    j2_decay_exponent,
    probe_integral,
    region_split,
    stationary_point,
    vdc_certificate,
)
from .maximal import MaximalField, linearized_evolution, maximal_field, ratio_statistic
from .norms import l2_norm, sobolev_norm, tail_mass_fraction, weak_l2_quasinorm
from .propagator import evaluate_evolution, evolution_table, synthesize
from .quadrature import HalvingCertificate, ResolutionError
from .smoothing import (
    convolution_identity_check,
    dilate,
    domination_check,
    evolve_along_path,
    hl_maximal,
    kernel_K,
)

__version__ = "0.1.0"

__all__ = [
    "CounterexampleInstance",
    "EvolutionParams",
    "FrequencyGrid",
    "FrequencyProfile",
    "HalvingCertificate",
    "KernelProbeParams",
    "MaximalField",
    "RegionSplit",
    "ResolutionError",
    "RunConfig",
    "SpatialField",
    "SpatialGrid",
    "TimeLadder",
    "active_backend",
    "blow_up_trial",
    "convolution_identity_check",
    "critical_exponent",
    "dilate",
    "domination_check",
    "envelope_l1_estimate",
    "evaluate_evolution",
    "evolution_table",
    "evolve_along_path",
    "gamma_critical",
    "h_eps_derivative_bounds",
    "hl_maximal",
    "j2_decay_exponent",
    "kernel_K",
    "l2_norm",
    "linearized_evolution",
    "local_critical_exponent",
    "make_bump",
    "make_instance",
    "maximal_field",
    "optimal_time",
    "probe_integral",
    "ratio_statistic",
    "region_split",
    "set_backend",
    "sobolev_norm",
    "stationary_point",
    "synthesize",
    "tail_mass_fraction",
    "vdc_certificate",
    "weak_l2_quasinorm",
]
