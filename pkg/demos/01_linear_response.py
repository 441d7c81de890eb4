"""Linear response of the default tapered junction transmission line.

Cascades every unit cell's transfer matrix to get S11/S21 across 4-12 GHz,
shows the stopband carved out by the periodically inserted LC resonators,
and verifies that the lossless network is unitary.

Run:  python demos/01_linear_response.py
Writes linear_response.png next to this script.
"""

import os

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

import twpasim as tw

dev = tw.default_device()
print(f"device: {dev.cell_count} cells, loss tangent {dev.loss_tangent:g}")

freqs = np.linspace(4e9, 12e9, 2001)
resp = tw.cascade_sparams(dev, freqs)

gap = resp.s21_db < -20.0
center = 0.5 * (freqs[gap].min() + freqs[gap].max())
print(f"stopband: {freqs[gap].min() / 1e9:.3f} - {freqs[gap].max() / 1e9:.3f}"
      f" GHz, centered at {center / 1e9:.3f} GHz")

inband = (freqs > 4.5e9) & (freqs < 7.0e9)
print(f"mean in-band insertion loss: {-resp.s21_db[inband].mean():.3f} dB")

lossless = tw.cascade_sparams(dev.with_loss_tangent(0.0), freqs)
unit = np.abs(np.abs(lossless.s11.values) ** 2
              + np.abs(lossless.s21.values) ** 2 - 1.0)
print(f"lossless |S11|^2 + |S21|^2 deviates from 1 by at most {unit.max():.2e}")

disp = tw.dispersion(dev.with_loss_tangent(0.0), freqs)

fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
ax1.plot(freqs / 1e9, resp.s21_db, label="|S21| (with loss)")
ax1.plot(freqs / 1e9, 20 * np.log10(np.abs(resp.s11.values) + 1e-300),
         label="|S11|", alpha=0.6)
ax1.set_ylabel("dB")
ax1.set_ylim(-40, 2)
ax1.legend()
ax2.plot(freqs / 1e9, disp.k_per_cell, color="tab:green")
ax2.set_xlabel("frequency [GHz]")
ax2.set_ylabel("k per cell [rad]")
fig.tight_layout()
out = os.path.join(os.path.dirname(__file__), "linear_response.png")
fig.savefig(out, dpi=120)
print(f"wrote {out}")
