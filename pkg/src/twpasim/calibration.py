"""Absolute-power calibration procedures and their synthetic-data twins.

Three independent routes to an absolute power reference:

* waveguide-QED: power-dependent extinction of a qubit strongly coupled
  to a transmission line (global fit over a 2-D transmission surface);
* measurement-induced dephasing (MID): AC Stark shift and dephasing rate
  of a dispersively coupled qubit versus drive detuning or drive power;
* resonator reflection fitting: asymmetric-S11 model giving f_r, Q_l,
  Q_c (hence kappa, kappa_ext) feeding the MID fit.

All internal rates are angular [rad/s]; public array interfaces use Hz.
Every fit ships with a synthetic generator so round-trip oracles are
built in.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares, minimize_scalar

from .constants import HBAR
from .errors import DomainError, FitError
from .fitting import FitResult, fit_least_squares
from .gain import dbm_to_watts, watts_to_dbm


# ---------------------------------------------------------------------------
# waveguide QED
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WqedParams:
    """Qubit-waveguide parameters, all angular [rad/s]."""

    gamma1: float  # emission rate into the line
    gamma2: float  # transverse decoherence rate
    drive_amplitude: float  # Rabi drive amplitude
    qubit_freq: float

    def __post_init__(self):
        if self.gamma1 <= 0 or self.gamma2 < self.gamma1 / 2:
            raise DomainError("need gamma2 >= gamma1/2 > 0")
        if self.drive_amplitude < 0:
            raise DomainError("drive amplitude must be >= 0")
        if self.qubit_freq <= 0:
            raise DomainError("qubit frequency must be > 0")


def wqed_transmission(detuning, params: WqedParams):
    """Complex transmission past the coupled qubit at drive detuning
    [rad/s]:  t = 1 - (G1/2G2) (1 - i D/G2) / (1 + (D/G2)^2 + W^2/(G1 G2))."""
    d = np.asarray(detuning, dtype=float)
    g1, g2, om = params.gamma1, params.gamma2, params.drive_amplitude
    den = 1.0 + (d / g2) ** 2 + om**2 / (g1 * g2)
    t = 1.0 - (g1 / (2.0 * g2)) * (1.0 - 1j * d / g2) / den
    return t if t.ndim else complex(t)


def wqed_power(params: WqedParams):
    """Absolute drive power at the qubit [W]: pi hbar w_i W^2 / (2 G1)."""
    return np.pi * HBAR * params.qubit_freq * params.drive_amplitude**2 / (
        2.0 * params.gamma1)


def drive_amplitude_for_power(power_watts, gamma1, qubit_freq):
    """Inverse of :func:`wqed_power`: Rabi amplitude [rad/s] at the qubit."""
    return np.sqrt(2.0 * gamma1 * np.asarray(power_watts) / (np.pi * HBAR * qubit_freq))


def synth_wqed_surface(gamma1, gamma2, qubit_freq, nominal_powers_dbm,
                       detunings, attenuation_db, noise_sigma=0.0, rng=None):
    """Synthetic normalized-transmission surface t[power, detuning] with
    complex Gaussian noise.  ``attenuation_db`` maps nominal power to the
    power at the qubit plane."""
    rng = rng or np.random.default_rng(0)
    powers_w = dbm_to_watts(np.asarray(nominal_powers_dbm) - attenuation_db)
    out = np.empty((len(powers_w), len(detunings)), dtype=complex)
    for j, p in enumerate(powers_w):
        om = drive_amplitude_for_power(p, gamma1, qubit_freq)
        params = WqedParams(gamma1, gamma2, float(om), qubit_freq)
        out[j] = wqed_transmission(np.asarray(detunings, dtype=float), params)
    if noise_sigma:
        out = out + noise_sigma * (rng.standard_normal(out.shape)
                                   + 1j * rng.standard_normal(out.shape))
    return out


def _wqed_initial_guess(detunings, surface, nominal_powers_dbm, qubit_freq):
    d = np.asarray(detunings, dtype=float)
    depth = 1.0 - np.real(surface).min(axis=1)  # extinction depth per power
    row = surface[np.argmax(depth)]
    dip = 1.0 - np.real(row)
    half = 0.5 * dip.max()
    above = d[dip >= half]
    g2 = 0.5 * (above.max() - above.min()) if above.size > 1 else np.ptp(d) / 10
    g2 = max(g2, np.ptp(d) / len(d))
    g1 = 2.0 * g2 * min(depth.max(), 0.999)
    # knee: power at which extinction halves -> W^2 = G1 G2 there
    knee = depth <= 0.5 * depth.max()
    if np.any(knee):
        p_nom_knee = np.asarray(nominal_powers_dbm)[knee].min()
    else:
        p_nom_knee = np.max(nominal_powers_dbm)
    p_knee = np.pi * HBAR * qubit_freq * g2 / 2.0  # power giving W^2 = G1 G2
    att = float(p_nom_knee - watts_to_dbm(p_knee))
    return float(g1), float(g2), att


def wqed_global_fit(detunings, nominal_powers_dbm, surface, qubit_freq,
                    x0=None) -> FitResult:
    """Global fit of the power-dependent transmission surface.

    ``surface`` is complex, shape (n_powers, n_detunings), normalized to
    far-detuned transmission.  A single (gamma1, gamma2) plus one line
    attenuation [dB] mapping nominal power to the qubit plane are fitted.
    The result's extras carry the calibrated absolute power [W and dBm]
    at the reference plane for each nominal power.
    """
    d = np.asarray(detunings, dtype=float)
    p_nom = np.asarray(nominal_powers_dbm, dtype=float)
    data = np.asarray(surface, dtype=complex)
    if data.shape != (p_nom.size, d.size):
        raise FitError("surface shape must be (n_powers, n_detunings)")
    if p_nom.size < 2:
        raise FitError("need at least two powers spanning the saturation knee")

    if x0 is None:
        x0 = _wqed_initial_guess(d, data, p_nom, qubit_freq)

    def model(g1, g2, att_db):
        p_w = dbm_to_watts(p_nom - att_db)
        om = drive_amplitude_for_power(p_w, g1, qubit_freq)
        den = 1.0 + (d[None, :] / g2) ** 2 + (om[:, None] ** 2) / (g1 * g2)
        return 1.0 - (g1 / (2.0 * g2)) * (1.0 - 1j * d[None, :] / g2) / den

    def residuals(x):
        lg1, lg2, att = x
        m = model(np.exp(lg1), np.exp(lg2), att)
        r = (m - data).ravel()
        return np.concatenate([r.real, r.imag])

    x0v = np.array([np.log(x0[0]), np.log(x0[1]), x0[2]])
    result = fit_least_squares(residuals, x0v, ["log_gamma1", "log_gamma2",
                                                "attenuation_db"])
    g1 = float(np.exp(result.parameters.pop("log_gamma1")))
    g2 = float(np.exp(result.parameters.pop("log_gamma2")))
    att = float(result.parameters.pop("attenuation_db"))
    sig = result.uncertainties
    result.parameters.update({"gamma1": g1, "gamma2": g2, "attenuation_db": att})
    result.uncertainties = {
        "gamma1": g1 * sig["log_gamma1"],
        "gamma2": g2 * sig["log_gamma2"],
        "attenuation_db": sig["attenuation_db"],
    }
    # ill-conditioned if the saturation knee (W^2 ~ G1 G2) was never reached
    p_w = dbm_to_watts(p_nom - att)
    om2 = drive_amplitude_for_power(p_w, g1, qubit_freq) ** 2
    if om2.max() / (g1 * g2) < 0.5:
        result.ill_conditioned = True
        result.uncertainties = {k: 10.0 * v for k, v in result.uncertainties.items()}
    result.extras["calibrated_power_w"] = p_w
    result.extras["calibrated_power_dbm"] = (p_nom - att).tolist()
    return result


# ---------------------------------------------------------------------------
# circuit QED: measurement-induced dephasing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CqedParams:
    """Qubit-resonator calibration parameters.  Frequencies and rates in
    Hz; the drive amplitude is angular [rad/s]."""

    qubit_freq: float  # [Hz]
    bare_resonator_freq: float  # [Hz]
    dispersive_shift: float  # chi [Hz]
    total_kappa: float  # [Hz]
    external_kappa: float  # [Hz]
    drive_detuning: float = 0.0  # Delta_r = w_r0 - w_d [Hz]
    drive_amplitude: float = 0.0  # eps_d [rad/s]
    dac_scale: float = 0.0  # c_eps = eps_d / sqrt(P_DAC)

    def __post_init__(self):
        if self.total_kappa <= 0 or self.dispersive_shift <= 0:
            raise DomainError("kappa and chi must be > 0")
        if not (0 < self.external_kappa <= self.total_kappa):
            raise DomainError("need 0 < kappa_ext <= kappa")


def _coherent_amplitudes(drive_amplitude, detuning_hz, chi_hz, kappa_hz):
    """(alpha_excited, alpha_ground); + chi for excited, - chi for ground."""
    eps = drive_amplitude
    ka = 2.0 * np.pi * kappa_hz
    da = 2.0 * np.pi * np.asarray(detuning_hz, dtype=float)
    ca = 2.0 * np.pi * chi_hz
    a_e = -1j * eps / (ka / 2.0 + 1j * (da + ca))
    a_g = -1j * eps / (ka / 2.0 + 1j * (da - ca))
    return a_e, a_g


def mid_rates(params: CqedParams):
    """Steady-state AC Stark shift and measurement-induced dephasing rate,
    both angular [rad/s]:  w_AC = 2 chi Re(a_e* a_g),
    Gamma_m = 2 chi Im(a_e* a_g)."""
    a_e, a_g = _coherent_amplitudes(params.drive_amplitude,
                                    params.drive_detuning,
                                    params.dispersive_shift,
                                    params.total_kappa)
    prod = np.conj(a_e) * a_g
    ca = 2.0 * np.pi * params.dispersive_shift
    w_ac = 2.0 * ca * np.real(prod)
    g_m = 2.0 * ca * np.imag(prod)
    if np.ndim(w_ac):
        return w_ac, g_m
    return float(w_ac), float(g_m)


def mid_input_power(params: CqedParams, drive_freq_hz=None):
    """Feedline input power [W]: P_in = hbar w_d eps_d^2 / kappa_ext."""
    if drive_freq_hz is None:
        drive_freq_hz = params.bare_resonator_freq - params.drive_detuning
    wd = 2.0 * np.pi * drive_freq_hz
    ke = 2.0 * np.pi * params.external_kappa
    return HBAR * wd * params.drive_amplitude**2 / ke


def synth_mid_sweep(c_eps, dac_powers, detunings_hz, base: CqedParams,
                    noise_frac=0.0, rng=None):
    """Synthetic (stark_hz, gamma_m_hz) data over a detuning sweep (scalar
    ``dac_powers``) or power sweep (scalar ``detunings_hz``).  Noise is
    Gaussian with sigma = noise_frac * peak of each dataset."""
    rng = rng or np.random.default_rng(0)
    p = np.atleast_1d(np.asarray(dac_powers, dtype=float))
    d = np.atleast_1d(np.asarray(detunings_hz, dtype=float))
    p, d = np.broadcast_arrays(p, d)
    stark = np.empty(p.size)
    gm = np.empty(p.size)
    for j in range(p.size):
        params = CqedParams(base.qubit_freq, base.bare_resonator_freq,
                            base.dispersive_shift, base.total_kappa,
                            base.external_kappa, float(d[j]),
                            c_eps * np.sqrt(p[j]))
        w_ac, g_m = mid_rates(params)
        stark[j] = w_ac / (2.0 * np.pi)
        gm[j] = g_m / (2.0 * np.pi)
    if noise_frac:
        stark = stark + noise_frac * np.abs(stark).max() * rng.standard_normal(p.size)
        gm = gm + noise_frac * np.abs(gm).max() * rng.standard_normal(p.size)
    return stark, gm


def mid_fit(dac_powers, detunings_hz, stark_hz, gamma_m_hz,
            base: CqedParams) -> FitResult:
    """Simultaneous fit of AC Stark shift and dephasing rate with the DAC
    scale c_eps = eps_d / sqrt(P_DAC) as the only free parameter.

    ``dac_powers`` and ``detunings_hz`` broadcast against each other (one
    of them is typically a scalar).  chi, kappa, kappa_ext come fixed from
    ``base`` (e.g. resonator-spectroscopy fits).  Extras carry per-point
    photon number and calibrated feedline input power.
    """
    p = np.atleast_1d(np.asarray(dac_powers, dtype=float))
    d = np.atleast_1d(np.asarray(detunings_hz, dtype=float))
    p, d = np.broadcast_arrays(p, d)
    stark = np.asarray(stark_hz, dtype=float)
    gm = np.asarray(gamma_m_hz, dtype=float)
    if stark.shape != p.shape or gm.shape != p.shape:
        raise FitError("data shapes do not match the sweep axes")

    def model(c):
        s = np.empty(p.size)
        g = np.empty(p.size)
        for j in range(p.size):
            params = CqedParams(base.qubit_freq, base.bare_resonator_freq,
                                base.dispersive_shift, base.total_kappa,
                                base.external_kappa, float(d[j]),
                                c * np.sqrt(p[j]))
            w_ac, g_m = mid_rates(params)
            s[j] = w_ac / (2.0 * np.pi)
            g[j] = g_m / (2.0 * np.pi)
        return s, g

    # rates scale as c^2 exactly -> linear solve for c^2 is the exact LSQ
    s1, g1 = model(1.0)
    ws = 1.0 / max(np.abs(stark).max(), 1e-300)
    wg = 1.0 / max(np.abs(gm).max(), 1e-300)
    basis = np.concatenate([ws * s1, wg * g1])
    y = np.concatenate([ws * stark, wg * gm])
    c2 = float(basis @ y / (basis @ basis))
    if c2 <= 0:
        raise FitError("data inconsistent with a positive drive scale")
    c0 = np.sqrt(c2)

    def residuals(x):
        s, g = model(abs(x[0]))
        return np.concatenate([ws * (s - stark), wg * (g - gm)])

    result = fit_least_squares(residuals, [c0], ["c_epsilon"])
    c = abs(result.parameters["c_epsilon"])
    result.parameters["c_epsilon"] = c

    # cross-consistency of the two datasets
    rs = np.linalg.norm(ws * (model(c)[0] - stark))
    rg = np.linalg.norm(wg * (model(c)[1] - gm))
    cs = float(basis[: p.size] @ (ws * stark) / (basis[: p.size] @ basis[: p.size]))
    cg = float(basis[p.size:] @ (wg * gm) / (basis[p.size:] @ basis[p.size:]))
    individual = min(rs, rg)
    scale_ratio = max(cs, cg) / max(min(cs, cg), 1e-300) \
        if min(cs, cg) > 0 else np.inf
    if (individual > 0 and max(rs, rg) > 5.0 * individual) or scale_ratio > 1.5:
        result.ill_conditioned = True
        result.extras["inconsistent_datasets"] = True

    eps = c * np.sqrt(p)
    _, a_g = _coherent_amplitudes(eps, d, base.dispersive_shift, base.total_kappa)
    drive_freq = base.bare_resonator_freq - d
    p_in = HBAR * 2 * np.pi * drive_freq * eps**2 / (2 * np.pi * base.external_kappa)
    result.extras["photon_number_ground"] = np.abs(a_g) ** 2
    result.extras["input_power_w"] = p_in
    result.extras["stark_scale_check"] = cs
    result.extras["gamma_scale_check"] = cg
    return result


# ---------------------------------------------------------------------------
# resonator reflection fitting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResonatorFit:
    """Asymmetric-resonator reflection model parameters."""

    f_r: float  # [Hz]
    q_loaded: float
    q_coupling: float  # |Q_c|
    amplitude: float
    phase: float  # [rad]
    delay: float  # [s]
    uncertainties: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.f_r <= 0 or self.q_loaded <= 0 or self.q_coupling <= 0:
            raise DomainError("f_r, Q_l, Q_c must be > 0")

    @property
    def kappa_hz(self):
        """Total linewidth f_r / Q_l [Hz]."""
        return self.f_r / self.q_loaded

    @property
    def kappa_ext_hz(self):
        """External linewidth f_r / Q_c [Hz]."""
        return self.f_r / self.q_coupling


def resonator_s11(freq, fit: ResonatorFit):
    """Asymmetric reflection model:
    a e^{i alpha} e^{-2 pi i f tau}
    [(2 Q_l/|Q_c|) + 2 i Q_l (f/f_r - 1)] / [1 - 2 i Q_l (f/f_r - 1)]."""
    f = np.asarray(freq, dtype=float)
    x = 2j * fit.q_loaded * (f / fit.f_r - 1.0)
    env = fit.amplitude * np.exp(1j * fit.phase) * np.exp(-2j * np.pi * f * fit.delay)
    s = env * ((2.0 * fit.q_loaded / fit.q_coupling) + x) / (1.0 - x)
    return s if s.ndim else complex(s)


def synth_resonator_spectrum(fit: ResonatorFit, freqs, snr_db=None, rng=None):
    """Model spectrum plus complex Gaussian noise at the given SNR
    (peak-signal to noise-sigma, in dB)."""
    rng = rng or np.random.default_rng(0)
    s = resonator_s11(np.asarray(freqs, dtype=float), fit)
    if snr_db is not None:
        sigma = np.abs(s).max() / 10.0 ** (snr_db / 20.0)
        s = s + sigma * (rng.standard_normal(s.shape)
                         + 1j * rng.standard_normal(s.shape)) / np.sqrt(2.0)
    return s


def _fit_circle(z):
    """Algebraic least-squares circle through complex points: (center, radius)."""
    x, y = z.real, z.imag
    design = np.column_stack([x, y, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, x**2 + y**2, rcond=None)
    xc, yc = coef[0] / 2.0, coef[1] / 2.0
    r = np.sqrt(max(coef[2] + xc**2 + yc**2, 0.0))
    return complex(xc, yc), float(r)


def _delay_estimate(f, z):
    """Cable delay that makes the trace most circular.

    The raw phase-slope estimate is biased by the resonance's own phase
    winding (up to one turn across the span), so scan candidates around it
    and keep the delay minimizing the radial scatter of a fitted circle.
    """
    span = f[-1] - f[0]
    tau0 = -np.polyfit(f, np.unwrap(np.angle(z)), 1)[0] / (2.0 * np.pi)

    def scatter(tau):
        zz = z * np.exp(2j * np.pi * f * tau)
        c, r = _fit_circle(zz)
        return float(np.sqrt(np.mean((np.abs(zz - c) - r) ** 2)))

    taus = tau0 + np.linspace(-1.5, 1.5, 61) / span
    j = int(np.argmin([scatter(t) for t in taus]))
    res = minimize_scalar(scatter, bounds=(taus[max(j - 1, 0)],
                                           taus[min(j + 1, taus.size - 1)]),
                          method="bounded")
    return float(res.x)


def _resonator_initial_guess(f, z):
    span = f[-1] - f[0]
    tau = _delay_estimate(f, z)
    zc = z * np.exp(2j * np.pi * f * tau)
    center, radius = _fit_circle(zc)

    # phase around the circle center follows 2*atan(2 Q_l (1 - f/f_r))
    theta = np.unwrap(np.angle(zc - center))
    nedge = max(len(f) // 10, 2)
    edges = np.r_[0:nedge, len(f) - nedge:len(f)]
    z_inf = np.median(zc[edges].real) + 1j * np.median(zc[edges].imag)
    chord = np.abs(zc - z_inf)
    i0 = int(np.argmax(chord))
    f_r = float(f[i0])
    above = f[chord >= chord[i0] / np.sqrt(2.0)]
    fwhm = max(above.max() - above.min(), span / len(f))
    q_l0 = f_r / fwhm
    th0 = float(theta[i0])

    def ph_res(x):
        fr, ql, t0 = x
        return t0 + 2.0 * np.arctan(2.0 * ql * (1.0 - f / fr)) - theta

    sol = least_squares(ph_res, [f_r, q_l0, th0], method="lm", max_nfev=500)
    f_r, q_l, th0 = float(sol.x[0]), abs(float(sol.x[1])), float(sol.x[2])

    # off-resonant and on-resonant points sit diametrically on the circle
    z_off = center - radius * np.exp(1j * th0)
    z_res = center + radius * np.exp(1j * th0)
    a = max(abs(z_off), 1e-12)
    alpha = float(np.angle(-z_off))
    q_c = 2.0 * q_l * a / max(abs(z_res), 1e-12 * a)
    return f_r, q_l, q_c, a, alpha, tau


def resonator_fit(freqs, s11_data, x0=None, n_starts=5) -> ResonatorFit:
    """Fit the asymmetric reflection model to a complex spectrum.

    Pre-fits the cable delay from the off-resonant phase slope, then runs
    the damped least-squares refinement from several delay perturbations
    (deterministic) to escape delay-phase local minima.
    """
    f = np.asarray(freqs, dtype=float)
    z = np.asarray(s11_data, dtype=complex)
    if f.size < 10:
        raise FitError("need at least 10 frequency points")
    guess = _resonator_initial_guess(f, z) if x0 is None else tuple(x0)
    if not (f[0] <= guess[0] <= f[-1]):
        raise FitError("resonance not inside the fitted span")
    span = f[-1] - f[0]
    f0 = 0.5 * (f[0] + f[-1])

    # Fit the envelope phase at the span center instead of at DC: the raw
    # (phase, delay) pair is nearly degenerate (a 1/f0 delay step rewinds
    # the phase by 2 pi), which leaves the optimizer crawling along an
    # arbitrarily long valley.  Center-referencing removes the degeneracy.
    def residuals(x):
        f_r, q_l, q_c, a, alpha_c, tau = x
        env_phase = alpha_c + 2.0 * np.pi * f0 * tau
        # abs() keeps the problem smooth and unbounded; sign is restored below
        m = resonator_s11(f, ResonatorFit(max(abs(f_r), 1.0), abs(q_l) + 1e-12,
                                          abs(q_c) + 1e-12, abs(a) + 1e-300,
                                          env_phase, tau))
        r = m - z
        return np.concatenate([r.real, r.imag])

    guess_c = np.array(guess, dtype=float)
    guess_c[4] = guess_c[4] - 2.0 * np.pi * f0 * guess_c[5]
    starts = []
    for j in range(1, n_starts):
        dt = (j - (n_starts - 1) / 2.0) * 0.25 / span
        starts.append(guess_c + np.array([0, 0, 0, 0, 0, dt]))
    names = ["f_r", "q_loaded", "q_coupling", "amplitude", "phase", "delay"]
    # parameters span ~17 decades; explicit scales keep the trust region sane
    scales = [span, max(abs(guess[1]), 1.0), max(abs(guess[2]), 1.0),
              max(abs(guess[3]), 1e-6), 1.0, 1.0 / span]
    result = fit_least_squares(residuals, guess_c, names,
                               starts=starts, x_scale=scales, diff_step=1e-6)
    p = result.parameters
    if not (f[0] <= abs(p["f_r"]) <= f[-1]):
        raise FitError("fitted resonance left the measured span")
    alpha = float(np.angle(np.exp(1j * (p["phase"]
                                        + 2.0 * np.pi * f0 * p["delay"]))))
    return ResonatorFit(abs(p["f_r"]), abs(p["q_loaded"]), abs(p["q_coupling"]),
                        abs(p["amplitude"]), alpha, p["delay"],
                        uncertainties=dict(result.uncertainties))


def chi_from_pair(fit_ground: ResonatorFit, fit_excited: ResonatorFit):
    """Dispersive shift chi [Hz] from the ground/excited resonator pair:
    half the f_r splitting (the full splitting is 2 chi)."""
    return 0.5 * (fit_excited.f_r - fit_ground.f_r)


# ---------------------------------------------------------------------------
# Ramsey-style dephasing extraction
# ---------------------------------------------------------------------------

def synth_ramsey_trace(times, amplitude, rate, freq_hz, phase=0.0,
                       offset=0.0, noise_sigma=0.0, rng=None):
    """Decaying sinusoid A e^{-G t} cos(2 pi f t + phi) + offset."""
    rng = rng or np.random.default_rng(0)
    t = np.asarray(times, dtype=float)
    y = amplitude * np.exp(-rate * t) * np.cos(2 * np.pi * freq_hz * t + phase) + offset
    if noise_sigma:
        y = y + noise_sigma * rng.standard_normal(t.shape)
    return y


def fit_ramsey(times, signal, x0=None) -> FitResult:
    """Fit A e^{-G t} cos(2 pi f t + phi) + offset to a time trace."""
    t = np.asarray(times, dtype=float)
    y = np.asarray(signal, dtype=float)
    if t.size < 10:
        raise FitError("need at least 10 time points")
    if x0 is None:
        off = float(np.mean(y))
        yc = y - off
        amp = float(np.max(np.abs(yc)))
        # dominant frequency from the periodogram on a uniform grid
        dt = float(np.median(np.diff(t)))
        spec = np.abs(np.fft.rfft(yc * np.hanning(t.size)))
        fgrid = np.fft.rfftfreq(t.size, dt)
        freq = float(fgrid[np.argmax(spec[1:]) + 1]) if t.size > 4 else 0.0
        # decay from the envelope ratio between the two halves
        h = t.size // 2
        e1 = np.sqrt(np.mean(yc[:h] ** 2)) + 1e-300
        e2 = np.sqrt(np.mean(yc[h:] ** 2)) + 1e-300
        rate = max(np.log(e1 / e2) / (np.mean(t[h:]) - np.mean(t[:h])), 0.0)
        x0 = [amp, rate, freq, 0.0, off]

    def residuals(x):
        amp, rate, freq, phase, off = x
        return amp * np.exp(-abs(rate) * t) * np.cos(2 * np.pi * freq * t + phase) \
            + off - y

    names = ["amplitude", "rate", "frequency", "phase", "offset"]
    # two phase starts: cosine-like and sine-like
    starts = [np.asarray(x0, dtype=float) + np.array([0, 0, 0, np.pi / 2, 0]),
              np.asarray(x0, dtype=float) + np.array([0, 0, 0, -np.pi / 2, 0]),
              np.asarray(x0, dtype=float) + np.array([0, 0, 0, np.pi, 0])]
    result = fit_least_squares(residuals, x0, names, starts=starts)
    result.parameters["rate"] = abs(result.parameters["rate"])
    dt_min = float(np.min(np.diff(np.sort(t))))
    if result.parameters["rate"] * dt_min > 2.0:
        raise FitError("decay too fast to resolve on this time grid")
    return result


def ramsey_mid_extract(times, trace, baseline_trace):
    """Excess dephasing rate [1/s] and frequency shift [Hz] of a driven
    Ramsey trace relative to the zero-drive baseline trace."""
    fit_d = fit_ramsey(times, trace)
    fit_b = fit_ramsey(times, baseline_trace)
    gamma_m = fit_d.parameters["rate"] - fit_b.parameters["rate"]
    shift = fit_d.parameters["frequency"] - fit_b.parameters["frequency"]
    return gamma_m, shift, fit_d, fit_b
