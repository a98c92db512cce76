"""Decoherence of slowly moving charged wave packets by blackbody photons.

Reduced units throughout: lengths in the thermal wavelength ``l_dB = hbar c/(k_B T)``,
times in ``l_dB/c``, velocities in units of ``c``.  The central quantity is the
decoherence exponent ``S``; the off-diagonal coherence is damped by ``exp(-S)``.
"""

__version__ = "0.1.0"

from .bose import (
    BoseIntegralSpec,
    QuadratureResult,
    bose_adaptive,
    bose_series,
    coth_sin_identity,
    log_sinh_ratio,
)
from .constants import FINE_STRUCTURE, PHYSICAL_CONSTANTS, RESOLVED_COEFFICIENTS, constants_hash
from .decoherence import (
    DecoherencePoint,
    DecoherenceResult,
    EnsembleSpec,
    ensemble_quadratic_form,
    n_particle_exponent,
    random_isotropic_ensemble,
    regime_classify,
    s_exact,
    s_large_y,
    s_reduced,
    s_regime,
    s_small_t_small_y,
    s_stationary,
)
from .errors import ConfigError, NegativeExponentError, NyquistError, QuadratureBudgetError
from .greens import ContractedKernelArgs, coincidence_limit, contracted_kernel, transverse_weights
from .interference import (
    ScreenPattern,
    TwoPacketConfig,
    envelope_overlap,
    s12_closed,
    s12_first_principles,
    screen_pattern,
)
from .oracles import OracleReport, mc_kernel_oracle, trapezoid_s_oracle, zeta_sums
from .units import (
    DimensionlessPoint,
    PhysicalConfig,
    from_dimensionless,
    thermal_wavelength,
    to_dimensionless,
)
from .wigner import (
    CenteredDensity,
    DensitySlice,
    WignerGrid,
    double_commutator_apply,
    gaussian_slice,
    gaussian_wigner,
    momentum_damping_evolve,
    wigner_transform,
)
