"""How distributed dielectric loss eats quantum efficiency inside the line.

Loss that occurs early in the line (before much gain has accumulated) costs
efficiency like loss in front of an amplifier; loss at the output end is
almost free.  This demo slices the device into segments, takes gain and
attenuation per segment from the coupled-mode solution, and chains them.

Run:  python demos/06_distributed_qe.py
"""

import numpy as np

import twpasim as tw

dev = tw.default_device()
pump = tw.PumpConfig(7.71e9, current_fraction=0.392)
freqs = np.linspace(4.5e9, 7.0e9, 6)

print("frequency   gain      intrinsic QE from distributed loss")
gains_db, etas = tw.device_loss_qe_profile(dev, pump, freqs, segments=32)
for f, g, e in zip(freqs, gains_db, etas):
    print(f"{f / 1e9:5.2f} GHz  {g:5.2f} dB   {e:.4f}")

g0, e0 = tw.device_loss_qe_profile(dev.with_loss_tangent(0.0), pump,
                                   [6.59e9], segments=16)
print(f"\nlossless check at 6.59 GHz: QE = {e0[0]:.12f} (exactly 1)")

# The same bookkeeping on a toy two-segment chain: all the loss up front
# versus all the loss at the back.
t = 0.9
front = tw.distributed_loss_qe([1.0, 1e4], [t, 1.0])
back = tw.distributed_loss_qe([1e4, 1.0], [1.0, t])
print(f"toy chain, 10% loss before the gain: QE = {front:.3f}")
print(f"toy chain, 10% loss after the gain:  QE = {back:.3f}")
