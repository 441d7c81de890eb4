"""Four-wave-mixing gain via coupled-mode integration along the taper.

A degenerate pump converts photon pairs into signal and idler
(2 f_p = f_s + f_i).  The three complex mode amplitudes are integrated
cell by cell in a rotating frame, with a position-dependent nonlinear
coefficient following the local junction critical current, local Bloch
dispersion for phase matching (including SPM/XPM), and per-cell
dielectric loss.  Pump depletion is always part of the equations; the
small-signal limit just seeds the signal far below the pump.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constants import HBAR
from .device import DeviceNetlist
from .errors import ConvergenceError, DomainError
from .network import local_wavenumbers

LN10 = np.log(10.0)

# signal frequencies this close to the pump are excluded from gain spectra
PUMP_GUARD_HZ = 30e6
# per-cell evanescent decay above this marks a bandgap frequency
GAP_IM_K_THRESHOLD = 1e-3


def dbm_to_watts(p_dbm):
    return 1e-3 * 10.0 ** (np.asarray(p_dbm, dtype=float) / 10.0)


def watts_to_dbm(p_w):
    return 10.0 * np.log10(np.asarray(p_w, dtype=float) / 1e-3)


@dataclass(frozen=True)
class PumpConfig:
    """Pump drive: frequency plus amplitude, given either as a fraction of
    the mid-device critical current or as input power in dBm (converted at
    the declared impedance)."""

    frequency: float  # [Hz]
    current_fraction: float | None = None  # I_p / I_0
    power_dbm: float | None = None
    conversion_impedance: float = 50.0  # [ohm]

    def __post_init__(self):
        if (self.current_fraction is None) == (self.power_dbm is None):
            raise DomainError("give exactly one of current_fraction or power_dbm")
        if self.current_fraction is not None and not (0 < self.current_fraction < 1):
            raise DomainError("current fraction must be in (0, 1)")

    def pump_current(self, mid_critical_current):
        """Pump current amplitude [A]."""
        if self.current_fraction is not None:
            return self.current_fraction * mid_critical_current
        p = dbm_to_watts(self.power_dbm)
        return np.sqrt(2.0 * p / self.conversion_impedance)

    def pump_power_watts(self, mid_critical_current):
        ip = self.pump_current(mid_critical_current)
        return 0.5 * ip**2 * self.conversion_impedance


@dataclass(frozen=True)
class ModeState:
    """Pump/signal/idler amplitudes (photon-flux normalized, pump input
    flux = 1) at one position along the device."""

    position: int  # cell index
    pump: complex
    signal: complex
    idler: complex

    @property
    def fluxes(self):
        return (abs(self.pump) ** 2, abs(self.signal) ** 2, abs(self.idler) ** 2)


@dataclass(frozen=True)
class GainSpectrum:
    """Signal photon-flux gain in dB relative to a lossless through."""

    frequencies: np.ndarray  # [Hz]
    gain_db: np.ndarray
    pump: PumpConfig
    substeps: int = 1


def _cme_arrays(netlist: DeviceNetlist, pump: PumpConfig, signal_freqs):
    """Per-cell wavenumbers and nonlinear coefficients for the CME run."""
    fs = np.atleast_1d(np.asarray(signal_freqs, dtype=float))
    fp = pump.frequency
    fi = 2.0 * fp - fs
    if np.any(fi <= 0):
        raise DomainError("idler frequency 2 f_p - f_s must stay positive")
    ic = np.array([jj.critical_current for jj, _ in netlist.cells])
    i0 = ic.min()
    ip = pump.pump_current(i0)
    if np.any(ip >= ic):
        raise DomainError("pump current exceeds a junction critical current")
    k_s = local_wavenumbers(netlist, fs)  # (ncell, nf)
    k_i = local_wavenumbers(netlist, fi)
    k_p = local_wavenumbers(netlist, np.array([fp]))[:, 0]  # (ncell,)
    # Kerr scaling of the junction chain: phase-matched gain per cell is
    # g = k_p * (I_p / I_c)^2 / 8, with pump flux normalized to 1
    g = k_p.real * (ip / ic) ** 2 / 8.0
    return fs, fi, k_s, k_i, k_p, g


def _integrate(netlist, k_s, k_i, k_p, g, a0, substeps):
    """RK4 rotating-frame integration over all cells.

    ``a0`` is (3, nf): pump, signal, idler amplitudes at the input.
    Returns final amplitudes and the flux trajectory (ncell+1, 3, nf).
    """
    tand = netlist.loss_tangent
    ncell = netlist.cell_count
    a = a0.astype(complex).copy()
    traj = np.empty((ncell + 1, 3) + a0.shape[1:], dtype=float)
    traj[0] = np.abs(a) ** 2
    # cumulative lossless phases at cell entries (rotating-frame angles)
    theta_p = 0.0
    theta_s = np.zeros(a0.shape[1])
    theta_i = np.zeros(a0.shape[1])
    h = 1.0 / substeps
    for n in range(ncell):
        gp = g[n]
        kp, ks, ki = k_p[n].real, k_s[n].real, k_i[n].real
        # dielectric loss plus evanescent decay inside a gap
        ap = kp * tand / 2.0 + k_p[n].imag
        as_ = ks * tand / 2.0 + k_s[n].imag
        ai = ki * tand / 2.0 + k_i[n].imag

        def rhs(x, amps):
            p, s, i_ = amps
            np_ = np.abs(p) ** 2
            ns = np.abs(s) ** 2
            ni = np.abs(i_) ** 2
            mismatch = np.exp(1j * (2.0 * (theta_p + kp * x)
                                    - (theta_s + ks * x) - (theta_i + ki * x)))
            dp = 1j * gp * ((np_ + 2 * ns + 2 * ni) * p
                            + 2 * s * i_ * np.conj(p) / mismatch) - ap * p
            ds = 1j * gp * ((2 * np_ + ns + 2 * ni) * s
                            + p * p * np.conj(i_) * mismatch) - as_ * s
            di = 1j * gp * ((2 * np_ + 2 * ns + ni) * i_
                            + p * p * np.conj(s) * mismatch) - ai * i_
            return np.stack([dp, ds, di])

        x = 0.0
        for _ in range(substeps):
            k1 = rhs(x, a)
            k2 = rhs(x + h / 2, a + h / 2 * k1)
            k3 = rhs(x + h / 2, a + h / 2 * k2)
            k4 = rhs(x + h, a + h * k3)
            a = a + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            x += h
        theta_p += kp
        theta_s = theta_s + ks
        theta_i = theta_i + ki
        traj[n + 1] = np.abs(a) ** 2
    return a, traj


def _run_converged(netlist, k_s, k_i, k_p, g, a0, tol_db=0.01,
                   substeps=1, max_substeps=16):
    """Integrate with Richardson step refinement until the signal gain
    changes by less than ``tol_db`` between refinements."""
    a, traj = _integrate(netlist, k_s, k_i, k_p, g, a0, substeps)
    gain = np.abs(a[1]) ** 2
    while substeps < max_substeps:
        substeps *= 2
        a2, traj2 = _integrate(netlist, k_s, k_i, k_p, g, a0, substeps)
        gain2 = np.abs(a2[1]) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            delta = np.abs(10.0 * np.log10(gain2 / gain))
        a, traj, gain = a2, traj2, gain2
        if np.nanmax(delta) < tol_db:
            return a, traj, substeps
    raise ConvergenceError(
        f"gain not converged to {tol_db} dB at {substeps} substeps/cell; "
        "possible onset of parametric self-oscillation")


def cme_gain(netlist: DeviceNetlist, pump: PumpConfig, signal_freqs,
             seed_flux=1e-12, tol_db=0.01, substeps=1) -> GainSpectrum:
    """Small-signal parametric gain spectrum [dB] at the given signal
    frequencies [Hz].

    Frequencies inside the pump guard band or inside the bandgap (signal
    branch) are returned as NaN.
    """
    fs, fi, k_s, k_i, k_p, g = _cme_arrays(netlist, pump, signal_freqs)
    a0 = np.zeros((3, fs.size), dtype=complex)
    a0[0] = 1.0
    a0[1] = np.sqrt(seed_flux)
    a, _, used = _run_converged(netlist, k_s, k_i, k_p, g, a0,
                                tol_db=tol_db, substeps=substeps)
    gain_db = 10.0 * np.log10(np.abs(a[1]) ** 2 / seed_flux)
    excluded = (np.abs(fs - pump.frequency) < PUMP_GUARD_HZ) | \
        (np.mean(k_s.imag, axis=0) > GAP_IM_K_THRESHOLD)
    gain_db = np.where(excluded, np.nan, gain_db)
    return GainSpectrum(fs, gain_db, pump, used)


def cme_trajectory(netlist: DeviceNetlist, pump: PumpConfig, signal_freq,
                   signal_flux=1e-12, substeps=4):
    """Mode-amplitude trajectory at a single signal frequency: a list of
    :class:`ModeState`, one per cell boundary (fluxes are exact; phases are
    rotating-frame)."""
    fs, fi, k_s, k_i, k_p, g = _cme_arrays(netlist, pump, [signal_freq])
    a0 = np.zeros((3, 1), dtype=complex)
    a0[0] = 1.0
    a0[1] = np.sqrt(signal_flux)
    _, traj = _integrate(netlist, k_s, k_i, k_p, g, a0, substeps)
    return [
        ModeState(n, np.sqrt(traj[n, 0, 0]), np.sqrt(traj[n, 1, 0]),
                  np.sqrt(traj[n, 2, 0]))
        for n in range(traj.shape[0])
    ]


def photon_flux_conservation(trajectory):
    """Manley-Rowe diagnostic: max relative drift of (n_signal - n_idler)
    along the trajectory.  Zero (to integration accuracy) for lossless runs."""
    ns = np.array([abs(m.signal) ** 2 for m in trajectory])
    ni = np.array([abs(m.idler) ** 2 for m in trajectory])
    diff = ns - ni
    scale = max(ns.max(), ni.max(), 1e-300)
    return float(np.max(np.abs(diff - diff[0])) / scale)


@dataclass(frozen=True)
class CompressionResult:
    """Gain versus signal power plus the interpolated 1-dB point."""

    signal_powers_dbm: np.ndarray
    gain_db: np.ndarray
    small_signal_gain_db: float
    p1db_dbm: float | None
    pump: PumpConfig
    signal_frequency: float

    @property
    def found(self):
        return self.p1db_dbm is not None


def compression_curve(netlist: DeviceNetlist, pump: PumpConfig, signal_freq,
                      signal_powers_dbm, tol_db=0.01) -> CompressionResult:
    """Gain compression by pump depletion at one signal frequency.

    Signal powers [dBm] are converted to photon flux at the device input
    (fixed ``pump.conversion_impedance`` reference plane) and the coupled
    modes are re-integrated with full pump back-action.  P1dB is the
    interpolated input power where gain drops 1 dB below the small-signal
    value; if compression is not reached the result carries ``p1db_dbm
    = None``.
    """
    powers = np.atleast_1d(np.asarray(signal_powers_dbm, dtype=float))
    fs = float(signal_freq)
    fp = pump.frequency
    ic0 = min(jj.critical_current for jj, _ in netlist.cells)
    pump_flux = pump.pump_power_watts(ic0) / (HBAR * 2 * np.pi * fp)
    signal_flux = dbm_to_watts(powers) / (HBAR * 2 * np.pi * fs) / pump_flux

    _, _, k_s, k_i, k_p, g = _cme_arrays(netlist, pump, np.full(powers.size, fs))
    a0 = np.zeros((3, powers.size), dtype=complex)
    a0[0] = 1.0
    a0[1] = np.sqrt(signal_flux)
    a, _, _ = _run_converged(netlist, k_s, k_i, k_p, g, a0, tol_db=tol_db)
    gain_db = 10.0 * np.log10(np.abs(a[1]) ** 2 / signal_flux)

    gss = cme_gain(netlist, pump, [fs], tol_db=tol_db).gain_db[0]
    target = gss - 1.0
    p1db = None
    below = np.nonzero(gain_db <= target)[0]
    if below.size and below[0] > 0:
        j = below[0]
        x0, x1 = powers[j - 1], powers[j]
        y0, y1 = gain_db[j - 1], gain_db[j]
        p1db = float(x0 + (target - y0) * (x1 - x0) / (y1 - y0))
    elif below.size and below[0] == 0:
        p1db = float(powers[0])  # already compressed at the lowest power
    return CompressionResult(powers, gain_db, float(gss), p1db, pump, fs)
