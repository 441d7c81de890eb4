"""Quantum-efficiency and noise-budget algebra.

Conventions: photon numbers n include the 1/2 vacuum photon and
eta = 1/n; efficiencies may exceed 1 numerically (e.g. vacuum-only
downstream gives eta_off = 2) and are reported as-is, flagged rather than
clamped, so the closed-form identities remain exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import HBAR, K_B
from .errors import DomainError


def eta_ideal(gain_linear):
    """Quantum efficiency of an ideal phase-preserving amplifier at gain G:
    1 / (2 - 1/G)."""
    g = np.asarray(gain_linear, dtype=float)
    if np.any(g < 1):
        raise DomainError("amplifier gain must be >= 1")
    out = 1.0 / (2.0 - 1.0 / g)
    return out if out.ndim else float(out)


def eta_sys(t_sys, freq):
    """System measurement efficiency hbar*omega / (k_B * T_sys)."""
    t = np.asarray(t_sys, dtype=float)
    if np.any(t <= 0):
        raise DomainError("system noise temperature must be > 0")
    out = HBAR * 2.0 * np.pi * np.asarray(freq, dtype=float) / (K_B * t)
    return out if out.ndim else float(out)


def eta_intrinsic(eta_on, eta_off, gain_linear):
    """Intrinsic amplifier quantum efficiency, normalized to the ideal
    phase-preserving amplifier:

        [2/eta_on - 2/(G*eta_off) + 1/G]^-1 / eta_ideal(G)
    """
    if min(np.min(np.asarray(eta_on)), np.min(np.asarray(eta_off))) <= 0:
        raise DomainError("efficiencies must be > 0")
    g = np.asarray(gain_linear, dtype=float)
    if np.any(g < 1):
        raise DomainError("amplifier gain must be >= 1")
    bracket = 2.0 / np.asarray(eta_on) - 2.0 / (g * np.asarray(eta_off)) + 1.0 / g
    if np.any(bracket <= 0):
        raise DomainError("inconsistent inputs: non-positive noise bracket")
    out = (1.0 / bracket) / eta_ideal(g)
    return out if out.ndim else float(out)


def snri_from_temps(t_on, t_off):
    """SNR improvement [dB] from the on/off system noise temperatures."""
    if min(np.min(np.asarray(t_on)), np.min(np.asarray(t_off))) <= 0:
        raise DomainError("temperatures must be > 0")
    out = 10.0 * np.log10(np.asarray(t_off, dtype=float) / np.asarray(t_on, dtype=float))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class NoiseBudget:
    """Gains, noise temperatures and photon numbers extracted from paired
    on/off signal+noise power measurements at the input (A) and output (D)
    reference planes."""

    frequency: float  # [Hz]
    resolution_bandwidth: float  # [Hz]
    s_a_on: float  # signal powers [W]
    s_a_off: float
    s_d_on: float
    s_d_off: float
    n_d_on: float  # noise powers at the output plane [W]
    n_d_off: float
    g_sys_on: float  # linear
    g_sys_off: float
    g_amp: float
    t_sys_on: float  # [K]
    t_sys_off: float
    n_sys_on: float  # photons, incl. the 1/2 vacuum photon
    n_sys_off: float
    added_photons: float


@dataclass(frozen=True)
class EfficiencyReport:
    frequency: float  # [Hz]
    gain_db: float
    eta_sys_on: float
    eta_sys_off: float
    eta_ideal: float
    eta_intrinsic_normalized: float
    nonphysical: bool  # intrinsic efficiency numerically above 1

    def to_dict(self):
        return {
            "frequency_hz": self.frequency,
            "gain_db": self.gain_db,
            "eta_sys_on": self.eta_sys_on,
            "eta_sys_off": self.eta_sys_off,
            "eta_ideal": self.eta_ideal,
            "eta_intrinsic_normalized": self.eta_intrinsic_normalized,
            "nonphysical": self.nonphysical,
            "photon_number_convention": "n includes the 1/2 vacuum photon; eta = 1/n",
        }


def budget_pipeline(s_a_on, s_d_on, n_d_on, s_a_off, s_d_off, n_d_off,
                    resolution_bandwidth, freq_on, freq_off=None):
    """Full reference-plane pipeline from raw powers [W] to a NoiseBudget
    and EfficiencyReport.

    The on/off measurements must be taken at the same frequency.  The
    normalized intrinsic efficiency computed via added photons equals the
    closed form of :func:`eta_intrinsic` identically.
    """
    if freq_off is None:
        freq_off = freq_on
    if freq_on != freq_off:
        raise DomainError("on/off measurements are at different frequencies")
    for name, v in [("signal", s_a_on), ("signal", s_d_on), ("noise", n_d_on),
                    ("signal", s_a_off), ("signal", s_d_off), ("noise", n_d_off)]:
        if v <= 0:
            raise DomainError(f"{name} power must be > 0")
    if resolution_bandwidth <= 0:
        raise DomainError("resolution bandwidth must be > 0")

    g_sys_on = s_d_on / s_a_on
    g_sys_off = s_d_off / s_a_off
    g_amp = s_d_on / s_d_off
    t_on = (n_d_on / g_sys_on) / (K_B * resolution_bandwidth)
    t_off = (n_d_off / g_sys_off) / (K_B * resolution_bandwidth)
    e_on = eta_sys(t_on, freq_on)
    e_off = eta_sys(t_off, freq_on)
    n_on = 1.0 / e_on
    n_off = 1.0 / e_off
    added = (n_on - 0.5) - (n_off - 0.5) / g_amp
    eta_norm = (2.0 - 1.0 / g_amp) / (1.0 + 2.0 * added)

    budget = NoiseBudget(
        frequency=freq_on, resolution_bandwidth=resolution_bandwidth,
        s_a_on=s_a_on, s_a_off=s_a_off, s_d_on=s_d_on, s_d_off=s_d_off,
        n_d_on=n_d_on, n_d_off=n_d_off,
        g_sys_on=g_sys_on, g_sys_off=g_sys_off, g_amp=g_amp,
        t_sys_on=t_on, t_sys_off=t_off,
        n_sys_on=n_on, n_sys_off=n_off, added_photons=added,
    )
    report = EfficiencyReport(
        frequency=freq_on,
        gain_db=10.0 * np.log10(g_amp),
        eta_sys_on=e_on,
        eta_sys_off=e_off,
        eta_ideal=eta_ideal(g_amp),
        eta_intrinsic_normalized=eta_norm,
        nonphysical=bool(eta_norm > 1.0),
    )
    return budget, report


def distributed_loss_qe(segment_gains, segment_transmissions, normalize=True):
    """Intrinsic quantum efficiency of a chain of alternating ideal
    parametric-gain segments and beamsplitter-loss segments.

    Each gain segment is an ideal phase-preserving amplifier (adds
    (G-1)/2 photons at its input scale); each loss segment mixes in vacuum.
    Vacuum enters the chain; the result is the added-photon efficiency
    referred to the input, normalized by eta_ideal of the total gain.
    """
    gains = np.atleast_1d(np.asarray(segment_gains, dtype=float))
    trans = np.atleast_1d(np.asarray(segment_transmissions, dtype=float))
    if gains.size == 0 or trans.size == 0:
        raise DomainError("empty gain/transmission profile")
    if gains.size != trans.size:
        raise DomainError("need one transmission per gain segment")
    if np.any(gains < 1):
        raise DomainError("segment gains must be >= 1")
    if np.any((trans <= 0) | (trans > 1)):
        raise DomainError("transmissions must lie in (0, 1]")
    n = 0.5  # vacuum in, incl. the half photon
    g_tot = 1.0
    for g, t in zip(gains, trans):
        n = g * n + (g - 1.0) / 2.0
        g_tot *= g
        n = t * n + (1.0 - t) / 2.0
        g_tot *= t
    added = n / g_tot - 0.5
    eta = 1.0 / (1.0 + 2.0 * added)
    if not normalize:
        return eta
    return eta / eta_ideal(max(g_tot, 1.0))


def device_loss_qe_profile(netlist, pump, signal_freqs, segments=64):
    """Distributed-loss intrinsic QE of the simulated device.

    Splits the device into ``segments`` blocks; each block's gain is the
    lossless coupled-mode signal-flux gain density and its transmission
    comes from the per-cell dielectric attenuation k*tan(delta).  Returns
    (total_gain_db, eta) arrays over the signal frequencies.
    """
    from .gain import cme_gain  # local import to avoid a cycle
    from .network import local_wavenumbers

    fs = np.atleast_1d(np.asarray(signal_freqs, dtype=float))
    lossless = netlist.with_loss_tangent(0.0)
    ncell = netlist.cell_count
    bounds = np.linspace(0, ncell, segments + 1).astype(int)

    k_s = local_wavenumbers(netlist, fs).real  # (ncell, nf)
    tand = netlist.loss_tangent

    etas = np.empty(fs.size)
    gains_db = np.empty(fs.size)
    for j, f in enumerate(fs):
        traj = _lossless_gain_profile(lossless, pump, f)
        total = traj[-1]
        gains_db[j] = 10.0 * np.log10(total)
        seg_gain = np.empty(segments)
        seg_trans = np.empty(segments)
        for m in range(segments):
            a, b = bounds[m], bounds[m + 1]
            seg_gain[m] = max(traj[b] / traj[a], 1.0)
            seg_trans[m] = np.exp(-np.sum(k_s[a:b, j]) * tand)
        etas[j] = distributed_loss_qe(seg_gain, seg_trans)
    return gains_db, etas


def _lossless_gain_profile(lossless_netlist, pump, signal_freq):
    """Cumulative lossless signal-flux gain at each cell boundary."""
    from .gain import cme_trajectory

    seed = 1e-12
    traj = cme_trajectory(lossless_netlist, pump, signal_freq, signal_flux=seed)
    ns = np.array([abs(m.signal) ** 2 for m in traj])
    return ns / seed
