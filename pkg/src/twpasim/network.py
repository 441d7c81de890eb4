"""Small-signal frequency-domain analysis of the amplifier netlist.

Everything here is linear: ABCD transfer matrices per element, the full
cascade to S-parameters, the per-cell dispersion relation, dielectric
attenuation, and the loss-tangent fit of measured insertion loss.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import savgol_filter

from .device import DeviceNetlist, ResonatorSpec, StubSpec, stub_impedance_exact
from .errors import CascadeOverflowError, FitError, SingularityError
from .spectrum import ComplexSpectrum

LN10 = np.log(10.0)

# |S21| below this is treated as inside the resonator bandgap: phase cannot
# be resolved there and fit points are excluded.
GAP_THRESHOLD_DB = -20.0


@dataclass(frozen=True)
class TwoPortMatrix:
    """ABCD matrix; ``b`` carries ohms and ``c`` siemens.  Entries may be
    scalars or arrays over frequency."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __matmul__(self, other):
        return TwoPortMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def det(self):
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls):
        return cls(1.0 + 0j, 0.0 + 0j, 0.0 + 0j, 1.0 + 0j)

    @classmethod
    def series(cls, impedance):
        z = np.asarray(impedance, dtype=complex)
        one = np.ones_like(z)
        return cls(one, z, np.zeros_like(z), one)

    @classmethod
    def shunt(cls, admittance):
        y = np.asarray(admittance, dtype=complex)
        one = np.ones_like(y)
        return cls(one, np.zeros_like(y), y, one)

    def sparams(self, z0=50.0):
        """(S11, S21) for a reciprocal network between matched ports."""
        den = self.a + self.b / z0 + self.c * z0 + self.d
        s11 = (self.a + self.b / z0 - self.c * z0 - self.d) / den
        s21 = 2.0 * self.det() / den
        return s11, s21


def cell_series_impedance(cell, freq):
    """Series impedance of the junction chain: n_jj junctions, each an
    L_J || C_J resonator.  ``freq`` angular [rad/s]."""
    jj, _ = cell
    w = np.asarray(freq, dtype=float)
    lj = jj.junction_inductance
    denom = 1.0 - w**2 * lj * jj.junction_capacitance
    return jj.junctions_per_cell * 1j * w * lj / denom


def cell_shunt_admittance(cell, freq, loss_tangent=0.0):
    """Shunt admittance of the cell's stub, with dielectric loss applied to
    the stub capacitance (complex permittivity)."""
    _, stub = cell
    w = np.asarray(freq, dtype=float)
    ratio = w / stub.quarter_wave_freq
    nearest_odd = 2.0 * np.round(0.5 * (ratio - 1.0)) + 1.0
    if np.any(np.abs(ratio - nearest_odd) < 1e-6):
        bad = np.atleast_1d(w)[np.atleast_1d(np.abs(ratio - nearest_odd) < 1e-6)][0]
        raise SingularityError(
            f"stub quarter-wave short at {bad:.6e} rad/s makes the shunt singular",
            frequency=float(bad),
        )
    return 1.0 / stub_impedance_exact(w, stub, loss_tangent)


def unit_cell_abcd(cell, freq, loss_tangent=0.0) -> TwoPortMatrix:
    """ABCD of one unit cell: series junction chain, then the stub shunt
    (L-section).  ``freq`` angular [rad/s], scalar or array."""
    z = cell_series_impedance(cell, freq)
    y = cell_shunt_admittance(cell, freq, loss_tangent)
    return TwoPortMatrix.series(z) @ TwoPortMatrix.shunt(y)


def resonator_shunt_admittance(resonator: ResonatorSpec, freq):
    """Admittance of the coupling capacitor in series with the LC tank."""
    w = np.asarray(freq, dtype=float)
    l, c, cc = resonator.inductance, resonator.capacitance, resonator.coupling_capacitance
    num = 1j * w * cc * (1.0 - w**2 * l * c)
    den = 1.0 - w**2 * l * (c + cc)
    # clamp the series-resonance pole (gap center) so a grid point landing
    # exactly on it yields a huge-but-finite lossless shunt
    tiny = 1e-12
    den = np.where(np.abs(den) < tiny, np.where(den < 0, -tiny, tiny), den)
    return num / den


def resonator_shunt_abcd(resonator: ResonatorSpec, freq) -> TwoPortMatrix:
    """ABCD of one capacitively coupled phase-matching resonator shunt."""
    return TwoPortMatrix.shunt(resonator_shunt_admittance(resonator, freq))


@dataclass(frozen=True)
class LinearResponse:
    """Cascade result on a frequency grid (frequencies in Hz)."""

    s11: ComplexSpectrum
    s21: ComplexSpectrum
    s21_db: np.ndarray  # exact dB even where the complex value underflows

    @property
    def frequencies(self):
        return self.s11.frequencies


def cascade_sparams(netlist: DeviceNetlist, frequencies) -> LinearResponse:
    """S-parameters of the full netlist at the given frequencies [Hz].

    The ABCD product runs in cell order with the periodic resonators
    inserted at their recorded positions.  The running product is
    renormalized so that deep-bandgap evanescence cannot overflow; the dB
    magnitude of S21 stays exact via the accumulated log scale.
    """
    f = np.asarray(frequencies, dtype=float)
    w = 2.0 * np.pi * f
    z0 = netlist.target_impedance
    tand = netlist.loss_tangent

    a = np.ones_like(w, dtype=complex)
    b = np.zeros_like(a)
    c = np.zeros_like(a)
    d = np.ones_like(a)
    log10_scale = np.zeros_like(w)

    res_after = dict(netlist.resonators)

    def renorm():
        nonlocal a, b, c, d, log10_scale
        m = np.maximum.reduce([np.abs(a), np.abs(b) / z0, np.abs(c) * z0, np.abs(d)])
        m = np.where(m > 0, m, 1.0)
        a, b, c, d = a / m, b / m, c / m, d / m
        log10_scale += np.log10(m)

    for i, cell in enumerate(netlist.cells):
        z = cell_series_impedance(cell, w)
        y = cell_shunt_admittance(cell, w, tand)
        e = 1.0 + z * y
        a, b = a * e + b * y, a * z + b
        c, d = c * e + d * y, c * z + d
        if i in res_after:
            yr = resonator_shunt_admittance(res_after[i], w)
            a = a + b * yr
            c = c + d * yr
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))
                and np.all(np.isfinite(c)) and np.all(np.isfinite(d))):
            raise CascadeOverflowError(
                f"transfer-matrix cascade overflowed at cell {i}", cell_index=i)
        if (i + 1) % 16 == 0:
            renorm()
    renorm()

    den = a + b / z0 + c * z0 + d
    s11 = (a + b / z0 - c * z0 - d) / den
    with np.errstate(under="ignore"):
        s21 = (2.0 / den) * 10.0 ** (-log10_scale)
    s21_db = 20.0 * (np.log10(np.abs(2.0 / den)) - log10_scale)
    return LinearResponse(
        ComplexSpectrum(f, s11, z0),
        ComplexSpectrum(f, s21, z0),
        s21_db,
    )


@dataclass(frozen=True)
class DispersionResult:
    """Unwrapped per-cell wavenumber from the cascade transmission phase."""

    frequencies: np.ndarray  # [Hz]
    k_per_cell: np.ndarray  # [rad/cell], NaN inside the bandgap
    gap_mask: np.ndarray  # True where |S21| is below the gap threshold
    cell_count: int
    s21_db: np.ndarray


def dispersion(netlist: DeviceNetlist, frequencies,
               gap_threshold_db=GAP_THRESHOLD_DB) -> DispersionResult:
    """k(omega) in rad/cell from the unwrapped cumulative S21 phase.

    Inside the resonator bandgap the phase cannot be resolved; those points
    are flagged in ``gap_mask`` and set to NaN rather than interpolated.
    The grid should be dense enough that per-step phase stays below pi.
    """
    resp = cascade_sparams(netlist, frequencies)
    phase = np.unwrap(np.angle(resp.s21.values))
    k = -phase / netlist.cell_count
    # anchor the branch: k -> 0 as f -> 0 means the lowest in-band point
    # should sit near its delay-line estimate
    gap = resp.s21_db < gap_threshold_db
    k = np.where(gap, np.nan, k)
    return DispersionResult(np.asarray(frequencies, dtype=float), k, gap,
                            netlist.cell_count, resp.s21_db)


def bloch_wavenumber(abcd: TwoPortMatrix):
    """Complex Bloch wavenumber per cell, acos((A+D)/2); the imaginary part
    is the evanescent decay inside a gap."""
    trace = 0.5 * (abcd.a + abcd.d)
    k = np.arccos(trace.astype(complex))
    return np.where(k.imag < 0, np.conj(k), k)


def local_wavenumbers(netlist: DeviceNetlist, frequencies):
    """Per-cell complex Bloch wavenumber with the periodic resonator loading
    smeared uniformly over its insertion period.

    Returns an array of shape (cell_count, len(frequencies)) in rad/cell,
    lossless (dielectric loss is handled separately).  Used as the local
    dispersion entering the nonlinear coupled-mode model.
    """
    f = np.atleast_1d(np.asarray(frequencies, dtype=float))
    w = 2.0 * np.pi * f
    if netlist.resonators:
        period = netlist.resonators[0][1].insertion_period
        y_res = resonator_shunt_admittance(netlist.resonators[0][1], w) / period
    else:
        y_res = np.zeros_like(w, dtype=complex)
    out = np.empty((netlist.cell_count, f.size), dtype=complex)
    for i, cell in enumerate(netlist.cells):
        z = cell_series_impedance(cell, w)
        y = cell_shunt_admittance(cell, w, 0.0) + y_res
        trace = 1.0 + 0.5 * z * y
        k = np.arccos(trace.astype(complex))
        out[i] = np.where(k.imag < 0, np.conj(k), k)
    return out


def dielectric_attenuation_db(disp: DispersionResult, loss_tangent):
    """Total dielectric attenuation in dB: (10/ln10) * N * k(w) * tan d."""
    return (10.0 / LN10) * disp.cell_count * disp.k_per_cell * loss_tangent


@dataclass(frozen=True)
class LossFitResult:
    """Effective loss tangent plus frequency-independent offset."""

    loss_tangent_eff: float
    offset_db: float
    slope_uncertainty: float
    offset_uncertainty: float
    residuals_db: np.ndarray


def fit_loss_tangent(insertion_loss_db, disp: DispersionResult,
                     smooth_window=501, smooth_order=2) -> LossFitResult:
    """Regress dB insertion loss onto the dielectric-attenuation basis.

    ``insertion_loss_db`` is positive loss (i.e. -|S21| dB) on the grid of
    ``disp``.  Bandgap points are excluded.  Savitzky-Golay pre-smoothing
    is applied when the window fits the data; pass ``smooth_window=None``
    to disable.
    """
    loss = np.asarray(insertion_loss_db, dtype=float)
    mask = ~disp.gap_mask & np.isfinite(disp.k_per_cell) & np.isfinite(loss)
    if mask.sum() < 10:
        raise FitError("need at least 10 usable points outside the bandgap")
    if smooth_window and mask.sum() > smooth_window:
        sm = loss.copy()
        sm[mask] = savgol_filter(loss[mask], smooth_window, smooth_order)
        loss = sm
    basis = (10.0 / LN10) * disp.cell_count * disp.k_per_cell  # dB per unit tan d
    x = basis[mask]
    y = loss[mask]
    design = np.column_stack([x, np.ones_like(x)])
    if np.linalg.matrix_rank(design) < 2:
        raise FitError("rank-deficient basis: attenuation basis is constant")
    coef, res, _, _ = np.linalg.lstsq(design, y, rcond=None)
    fitted = design @ coef
    residuals = y - fitted
    dof = max(len(y) - 2, 1)
    sigma2 = float(residuals @ residuals) / dof
    cov = sigma2 * np.linalg.inv(design.T @ design)
    return LossFitResult(
        loss_tangent_eff=float(coef[0]),
        offset_db=float(coef[1]),
        slope_uncertainty=float(np.sqrt(cov[0, 0])),
        offset_uncertainty=float(np.sqrt(cov[1, 1])),
        residuals_db=residuals,
    )
