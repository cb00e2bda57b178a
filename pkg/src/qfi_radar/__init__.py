"""Quantum Fisher information toolkit for two-photon Doppler radar.

Estimates (time-sum, frequency-difference) and (time-difference,
frequency-sum) observable pairs for three probe strategies — an entangled
biphoton, two independent single photons, and signal-idler quantum
illumination — with exact closed forms, an independent numerical
Fisher-information engine that adjudicates them, Monte Carlo bound
saturation checks, and end-to-end radar scenarios.
"""

from .analytic import (
    QfiResult,
    SldPair,
    adjudicate,
    asymptotic_bound,
    bound_curve,
    compatibility_residual,
    published_mixed_qfi,
    qfi_entangled,
    qfi_quantum_illumination,
    qfi_single_photon,
    sld_matrices,
)
from .kinematics import (
    NATURAL_UNITS,
    SI_UNITS,
    ParameterPair,
    PhysicalConstants,
    ProbeConfig,
    ReturnParams,
    Strategy,
    SumDiffParams,
    Target,
    central_position,
    doppler_bandwidth,
    doppler_factor,
    doppler_frequency,
    jacobian_params,
    object_size,
    object_velocity,
    relative_velocity,
    reparametrize,
    return_params,
    round_trip_time,
    split_sum_diff,
    sum_diff,
)
from .montecarlo import (
    McConfig,
    McReport,
    estimate_pair,
    run_scenario,
    sample_frequencies,
    sample_times,
)
from .oracle import (
    MixedModel,
    OracleResult,
    grid_crosscheck,
    model_for,
    qfi_numeric,
)
from .selftest import run_selftest
from .states import (
    GaussianBiphoton,
    GaussianSinglePhoton,
    biphoton_amplitude,
    frequency_covariance,
    overlap,
    overlap_biphoton,
    overlap_single,
    single_amplitude,
    time_covariance,
)

__version__ = "0.1.0"
