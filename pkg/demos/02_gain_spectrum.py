"""Parametric gain spectrum from the coupled-mode integration.

Pumps the default device just below the resonator stopband and sweeps the
signal across the band for a few pump strengths, showing how the gain
window opens up as the pump current approaches the critical current.

Run:  python demos/02_gain_spectrum.py
Writes gain_spectrum.png next to this script.
"""

import os

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

import twpasim as tw

dev = tw.default_device()
freqs = np.linspace(4.3e9, 7.5e9, 65)

fig, ax = plt.subplots(figsize=(7, 4.5))
for frac in (0.25, 0.33, 0.392):
    pump = tw.PumpConfig(7.71e9, current_fraction=frac)
    spec = tw.cme_gain(dev, pump, freqs)
    peak = np.nanmax(spec.gain_db)
    print(f"pump at {frac:.3f} of critical current: "
          f"peak gain {peak:.1f} dB")
    ax.plot(freqs / 1e9, spec.gain_db, label=f"I_p/I_0 = {frac}")

pump = tw.PumpConfig(7.71e9, current_fraction=0.392)
spec = tw.cme_gain(dev, pump, freqs)
band = spec.gain_db >= 20.0
print(f">= 20 dB from {freqs[band].min() / 1e9:.2f} to "
      f"{freqs[band].max() / 1e9:.2f} GHz at the strongest pump")

ax.axhline(20, color="gray", ls="--", lw=0.8)
ax.set_xlabel("signal frequency [GHz]")
ax.set_ylabel("gain [dB]")
ax.legend()
fig.tight_layout()
out = os.path.join(os.path.dirname(__file__), "gain_spectrum.png")
fig.savefig(out, dpi=120)
print(f"wrote {out}")
