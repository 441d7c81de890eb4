"""Extracting an effective dielectric loss tangent from insertion loss.

Synthesizes a noisy insertion-loss trace from a known loss tangent plus a
frequency-independent setup offset, then regresses it back out using the
device's own dispersion as the attenuation basis.

Run:  python demos/04_loss_fit.py
Writes loss_fit.png next to this script.
"""

import os

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

import twpasim as tw

dev = tw.default_device().with_loss_tangent(0.0)
freqs = np.linspace(4e9, 12e9, 4001)
disp = tw.dispersion(dev, freqs)

tand_true, offset_true = 6e-5, 0.11
rng = np.random.default_rng(1)
loss = tw.dielectric_attenuation_db(disp, tand_true) + offset_true \
    + 0.05 * rng.standard_normal(freqs.size)

fit = tw.fit_loss_tangent(loss, disp)
print(f"true  loss tangent {tand_true:.3e}, offset {offset_true:.3f} dB")
print(f"fit   loss tangent {fit.loss_tangent_eff:.3e} "
      f"+- {fit.slope_uncertainty:.1e}, offset {fit.offset_db:.3f} dB")
print("note: points inside the resonator stopband are excluded "
      "automatically")

model = tw.dielectric_attenuation_db(disp, fit.loss_tangent_eff) \
    + fit.offset_db
keep = ~disp.gap_mask

fig, ax = plt.subplots(figsize=(7, 4))
ax.plot(freqs[keep] / 1e9, loss[keep], ".", ms=2, alpha=0.3, label="data")
ax.plot(freqs[keep] / 1e9, model[keep], color="tab:red", label="fit")
ax.set_xlabel("frequency [GHz]")
ax.set_ylabel("insertion loss [dB]")
ax.legend()
fig.tight_layout()
out = os.path.join(os.path.dirname(__file__), "loss_fit.png")
fig.savefig(out, dpi=120)
print(f"wrote {out}")
