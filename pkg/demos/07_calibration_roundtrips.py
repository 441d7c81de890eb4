"""Calibration fits: synthesize a noisy dataset, fit it, compare to truth.

Four experiment-style datasets are generated with known parameters and
realistic noise, then recovered by the corresponding fitter:

  1. complex reflection spectrum of a resonator -> f_r, loaded/coupling Q
  2. saturation of transmission through a two-level scatterer versus power
     and detuning -> both decay rates plus the absolute line attenuation
  3. Stark shift and measurement-induced dephasing versus drive detuning
     -> the drive-amplitude calibration constant
  4. pairs of decaying oscillations -> excess dephasing rate and frequency
     shift caused by a drive

Run:  python demos/07_calibration_roundtrips.py
"""

import numpy as np

import twpasim as tw
from twpasim.calibration import (
    CqedParams, ResonatorFit, mid_fit, ramsey_mid_extract, resonator_fit,
    synth_mid_sweep, synth_ramsey_trace, synth_resonator_spectrum,
    synth_wqed_surface, wqed_global_fit)
from twpasim.constants import HBAR
from twpasim.gain import watts_to_dbm

rng = np.random.default_rng(2)

# --- 1. resonator reflection ------------------------------------------------
truth = ResonatorFit(6.505e9, 11400.0, 14200.0, 0.92, 0.35, 48e-9)
span = 12.0 * truth.kappa_hz
f = np.linspace(truth.f_r - span / 2, truth.f_r + span / 2, 801)
data = synth_resonator_spectrum(truth, f, snr_db=40.0, rng=rng)
fit = resonator_fit(f, data)
print("resonator:")
print(f"  f_r  {truth.f_r / 1e9:.6f} -> {fit.f_r / 1e9:.6f} GHz")
print(f"  Q_l  {truth.q_loaded:.0f} -> {fit.q_loaded:.0f}")
print(f"  Q_c  {truth.q_coupling:.0f} -> {fit.q_coupling:.0f}")

# --- 2. two-level scatterer saturation ---------------------------------------
g1 = 2 * np.pi * 1.0e6
g2 = 2 * np.pi * 0.7e6
wq = 2 * np.pi * 6.0e9
att = 62.0
p_knee = watts_to_dbm(np.pi * HBAR * wq * g2 / 2.0) + att
powers = np.linspace(p_knee - 15, p_knee + 15, 17)
det = np.linspace(-4 * g2, 4 * g2, 161)
surf = synth_wqed_surface(g1, g2, wq, powers, det, att,
                          noise_sigma=0.01, rng=rng)
res = wqed_global_fit(det, powers, surf, wq)
print("scatterer saturation:")
print(f"  gamma1 {g1 / 2 / np.pi / 1e6:.3f} -> "
      f"{res.parameters['gamma1'] / 2 / np.pi / 1e6:.3f} MHz")
print(f"  gamma2 {g2 / 2 / np.pi / 1e6:.3f} -> "
      f"{res.parameters['gamma2'] / 2 / np.pi / 1e6:.3f} MHz")
print(f"  attenuation {att:.2f} -> "
      f"{res.parameters['attenuation_db']:.2f} dB")

# --- 3. dephasing versus drive detuning --------------------------------------
base = CqedParams(5.769e9, 6.505e9, 1.296e6, 0.572e6, 0.458e6)
c_eps = 8.0e6
detunings = np.linspace(-3e6, 3e6, 41)
stark, gm = synth_mid_sweep(c_eps, 1.0, detunings, base,
                            noise_frac=0.02, rng=rng)
res = mid_fit(1.0, detunings, stark, gm, base)
print("drive calibration:")
print(f"  c_epsilon {c_eps:.3e} -> {res.parameters['c_epsilon']:.3e} "
      f"rad/s per sqrt(power unit)")

# --- 4. decaying-oscillation pair ---------------------------------------------
t = np.linspace(0.0, 30e-6, 801)
rate_b, freq_b = 1.0e5, 1.2e6
gamma_m, shift = 6.5e4, 1.0e5
baseline = synth_ramsey_trace(t, 1.0, rate_b, freq_b, 0.3, 0.5,
                              noise_sigma=0.005, rng=rng)
driven = synth_ramsey_trace(t, 1.0, rate_b + gamma_m, freq_b + shift,
                            0.3, 0.5, noise_sigma=0.005, rng=rng)
g_fit, s_fit, _, _ = ramsey_mid_extract(t, driven, baseline)
print("oscillation pair:")
print(f"  excess rate {gamma_m / 1e3:.1f} -> {g_fit / 1e3:.1f} kHz")
print(f"  freq shift  {shift / 1e3:.1f} -> {s_fit / 1e3:.1f} kHz")
