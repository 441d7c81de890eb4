"""Gain compression and the 1 dB compression point.

Sweeps the input signal power at fixed pump and watches the pump deplete:
the gain stays flat at small signal and rolls off once the signal steals a
noticeable fraction of the pump photons.

Run:  python demos/03_compression.py
Writes compression.png next to this script.
"""

import os

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

import twpasim as tw

dev = tw.default_device()
pump = tw.PumpConfig(7.71e9, current_fraction=0.38158)
powers = np.linspace(-130.0, -92.0, 39)

comp = tw.compression_curve(dev, pump, 6.59e9, powers)
print(f"small-signal gain: {comp.gain_db[0]:.2f} dB")
if comp.found:
    print(f"1 dB compression point: {comp.p1db_dbm:.1f} dBm input")
else:
    print("no compression within the swept power range")

fig, ax = plt.subplots(figsize=(7, 4))
ax.plot(powers, comp.gain_db, marker=".")
ax.axhline(comp.gain_db[0] - 1.0, color="gray", ls="--", lw=0.8,
           label="small-signal gain - 1 dB")
if comp.found:
    ax.axvline(comp.p1db_dbm, color="tab:red", ls=":", label="P1dB")
ax.set_xlabel("signal input power [dBm]")
ax.set_ylabel("gain [dB]")
ax.legend()
fig.tight_layout()
out = os.path.join(os.path.dirname(__file__), "compression.png")
fig.savefig(out, dpi=120)
print(f"wrote {out}")
