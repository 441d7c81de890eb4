"""Measurement-efficiency bookkeeping from raw power-budget numbers.

Starting from the four raw spectrum-analyzer readings (signal and noise at
the device plane, amplifier on and off), the pipeline computes the system
noise temperature, the quantum efficiency of the full chain in both states,
and the amplifier's intrinsic efficiency with the rest of the chain
de-embedded.

Run:  python demos/05_efficiency_budget.py
"""

import numpy as np

import twpasim as tw
from twpasim.constants import K_B

# A representative operating point: 20.2 dB of amplifier gain at 6.59 GHz,
# measured in a 10 kHz resolution bandwidth.
freq, rbw = 6.59e9, 1e4
g_amp, g_off = 104.2, 40.0
t_on, t_off = 0.378, 3.99  # system noise temperature, amp on / off [K]

s_a = 1e-16  # signal power at the device plane [W]
s_d_off = s_a * g_off
s_d_on = s_d_off * g_amp
n_d_on = (s_d_on / s_a) * K_B * t_on * rbw
n_d_off = (s_d_off / s_a) * K_B * t_off * rbw

budget, report = tw.budget_pipeline(
    s_a_on=s_a, s_d_on=s_d_on, n_d_on=n_d_on,
    s_a_off=s_a, s_d_off=s_d_off, n_d_off=n_d_off,
    resolution_bandwidth=rbw, freq_on=freq)

print(f"amplifier gain:          {report.gain_db:.2f} dB")
print(f"system noise temp (on):  {budget.t_sys_on * 1e3:.1f} mK "
      f"({budget.n_sys_on:.3f} photons incl. vacuum)")
print(f"system efficiency on:    {report.eta_sys_on:.4f}")
print(f"system efficiency off:   {report.eta_sys_off:.4f}")
snri = 10 * np.log10(report.eta_sys_on / report.eta_sys_off)
print(f"SNR improvement:         {snri:.2f} dB")
print(f"intrinsic efficiency:    {report.eta_intrinsic_normalized:.4f} "
      f"(1.0 = quantum-limited)")

# Cross-check against the closed-form expression.
closed = tw.eta_intrinsic(report.eta_sys_on, report.eta_sys_off,
                          budget.g_amp)
print(f"closed-form cross-check: {closed:.6f} "
      f"(rel diff {abs(report.eta_intrinsic_normalized / closed - 1):.1e})")

# Where would an ideal phase-insensitive amplifier sit?
ideal = tw.eta_ideal(budget.g_amp)
print(f"ideal-amplifier bound on the raw on-state efficiency: {ideal:.4f}")
