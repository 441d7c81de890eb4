"""Simulation and analysis toolkit for tapered Josephson traveling-wave
parametric amplifiers: linear response, four-wave-mixing gain, compression,
quantum-efficiency budgets, and absolute-power calibration fits."""

from .calibration import (
    CqedParams,
    ResonatorFit,
    WqedParams,
    chi_from_pair,
    fit_ramsey,
    mid_fit,
    mid_input_power,
    mid_rates,
    ramsey_mid_extract,
    resonator_fit,
    resonator_s11,
    synth_mid_sweep,
    synth_ramsey_trace,
    synth_resonator_spectrum,
    synth_wqed_surface,
    wqed_global_fit,
    wqed_power,
    wqed_transmission,
)
from .device import (
    DeviceNetlist,
    JunctionSpec,
    ResonatorSpec,
    StubSpec,
    TaperProfile,
    build_device,
    default_device,
    josephson_inductance,
    make_taper,
    matched_stub_rule,
    resonator_from_frequency,
    stub_impedance_exact,
    stub_lc_approx,
)
from .fitting import FitResult, fit_least_squares
from .gain import (
    CompressionResult,
    GainSpectrum,
    ModeState,
    PumpConfig,
    cme_gain,
    cme_trajectory,
    compression_curve,
    dbm_to_watts,
    photon_flux_conservation,
    watts_to_dbm,
)
from .network import (
    ComplexSpectrum,
    DispersionResult,
    LinearResponse,
    LossFitResult,
    TwoPortMatrix,
    cascade_sparams,
    dielectric_attenuation_db,
    dispersion,
    fit_loss_tangent,
    local_wavenumbers,
    resonator_shunt_abcd,
    unit_cell_abcd,
)
from .noise import (
    EfficiencyReport,
    NoiseBudget,
    budget_pipeline,
    device_loss_qe_profile,
    distributed_loss_qe,
    eta_ideal,
    eta_intrinsic,
    eta_sys,
    snri_from_temps,
)

__version__ = "0.1.0"
