"""Physical device description for a tapered Josephson traveling-wave amplifier.

The device is a ladder of unit cells, each consisting of a chain of
Josephson junctions in series and an open-ended coplanar stub to ground,
with capacitively coupled LC phase-matching resonators inserted
periodically along the line.  This module converts geometry/targets into
circuit element values and assembles the full netlist.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .constants import PHI0
from .errors import ConfigurationError, DomainError, ProfileError, SingularityError

# Fractional guard band around odd multiples of the stub quarter-wave
# frequency, where the open stub presents a short.
POLE_GUARD = 1e-6

TAPER_SHAPES = ("linear", "raised-cosine", "user-table")


def josephson_inductance(critical_current):
    """Josephson inductance L_J = Phi0 / (2 pi I_c) in henries."""
    ic = np.asarray(critical_current, dtype=float)
    if np.any(ic <= 0):
        raise DomainError("critical current must be positive")
    out = PHI0 / (2.0 * np.pi * ic)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class JunctionSpec:
    """A series chain of identical Josephson junctions within one cell."""

    critical_current: float  # [A]
    junction_capacitance: float = 0.0  # [F], per junction
    junctions_per_cell: int = 3

    def __post_init__(self):
        if self.critical_current <= 0:
            raise DomainError("critical_current must be > 0")
        if self.junctions_per_cell < 1:
            raise DomainError("junctions_per_cell must be >= 1")
        if self.junction_capacitance < 0:
            raise DomainError("junction_capacitance must be >= 0")

    @property
    def junction_inductance(self):
        """Inductance of a single junction [H]."""
        return josephson_inductance(self.critical_current)

    @property
    def chain_inductance(self):
        """Small-signal inductance of the whole series chain [H]."""
        return self.junctions_per_cell * self.junction_inductance


@dataclass(frozen=True)
class StubSpec:
    """Open-ended coplanar stub acting as a distributed capacitor to ground."""

    length: float  # [m]
    wave_velocity: float  # [m/s]
    characteristic_impedance: float  # [ohm]

    def __post_init__(self):
        if min(self.length, self.wave_velocity, self.characteristic_impedance) <= 0:
            raise DomainError("all StubSpec fields must be > 0")

    @property
    def quarter_wave_freq(self):
        """Quarter-wave resonance omega_qw = pi*v/(2*l) [rad/s]."""
        return np.pi * self.wave_velocity / (2.0 * self.length)


def stub_impedance_exact(freq, stub: StubSpec, loss_tangent: float = 0.0):
    """Input impedance of the open-ended stub, -j Z0 cot(pi w / 2 w_qw).

    ``freq`` is angular [rad/s] and may be an array.  Dielectric loss is
    included through a complex permittivity of the stub line.  Evaluation
    within the guard band of an odd multiple of the quarter-wave frequency
    raises :class:`SingularityError`.
    """
    w = np.asarray(freq, dtype=float)
    if np.any(w <= 0):
        raise DomainError("frequency must be > 0")
    ratio = w / stub.quarter_wave_freq
    # cot diverges at even multiples of w_qw (half-wave resonances); odd
    # multiples are shorts and only become singular once the stub is used
    # as a shunt admittance (guarded in the network layer).
    nearest_even = 2.0 * np.round(0.5 * ratio)
    bad_mask = (nearest_even >= 2.0) & (np.abs(ratio - nearest_even) < POLE_GUARD)
    if np.any(bad_mask):
        bad = np.atleast_1d(w)[np.atleast_1d(bad_mask)][0]
        raise SingularityError(
            f"stub impedance pole guard band hit at {bad:.6e} rad/s",
            frequency=float(bad),
        )
    s = np.sqrt(1.0 - 1j * loss_tangent)  # complex-permittivity scale
    arg = 0.5 * np.pi * ratio * s
    z = -1j * (stub.characteristic_impedance / s) / np.tan(arg)
    return z if z.ndim else complex(z)


def stub_lc_approx(stub: StubSpec):
    """Low-frequency series-LC equivalent (C_stub, L_stub) of the open stub.

    C_stub = l/(v Z0) and L_stub = Z0 l/(3 v), from the series expansion of
    the cot input impedance.
    """
    c = stub.length / (stub.wave_velocity * stub.characteristic_impedance)
    lser = stub.characteristic_impedance * stub.length / (3.0 * stub.wave_velocity)
    return c, lser


def stub_for_capacitance(c_stub, wave_velocity, characteristic_impedance):
    """StubSpec whose low-frequency capacitance equals ``c_stub``."""
    length = c_stub * wave_velocity * characteristic_impedance
    return StubSpec(length, wave_velocity, characteristic_impedance)


@dataclass(frozen=True)
class ResonatorSpec:
    """Capacitively coupled lumped-LC phase-matching resonator."""

    inductance: float  # [H]
    capacitance: float  # [F]
    coupling_capacitance: float  # [F]
    insertion_period: int = 8  # [cells]

    def __post_init__(self):
        if min(self.inductance, self.capacitance, self.coupling_capacitance) <= 0:
            raise DomainError("resonator element values must be > 0")
        if self.insertion_period < 1:
            raise DomainError("insertion_period must be >= 1")

    @property
    def resonant_frequency(self):
        """Bare LC resonance [rad/s]."""
        return 1.0 / np.sqrt(self.inductance * self.capacitance)

    @property
    def gap_frequency(self):
        """Series resonance of coupler + tank, where the shunt admittance
        diverges and the transmission gap is centered [rad/s]."""
        c_tot = self.capacitance + self.coupling_capacitance
        return 1.0 / np.sqrt(self.inductance * c_tot)


def resonator_from_frequency(resonant_frequency, capacitance,
                             coupling_capacitance, insertion_period=8,
                             align_gap=False):
    """ResonatorSpec with L chosen for the given resonance [rad/s].

    With ``align_gap`` the inductance is picked so the coupled series
    resonance (the transmission-gap center) lands on ``resonant_frequency``
    instead of the bare LC resonance.
    """
    c_eff = capacitance + (coupling_capacitance if align_gap else 0.0)
    l = 1.0 / (resonant_frequency**2 * c_eff)
    return ResonatorSpec(l, capacitance, coupling_capacitance, insertion_period)


@dataclass(frozen=True)
class TaperProfile:
    """Per-cell junction critical currents along the device."""

    cell_count: int
    edge_critical_current: float  # [A]
    mid_critical_current: float  # [A]
    shape: str
    per_cell_values: tuple = field(default=())

    def __post_init__(self):
        if self.shape not in TAPER_SHAPES:
            raise ProfileError(f"unknown taper shape {self.shape!r}")
        v = np.asarray(self.per_cell_values, dtype=float)
        n = self.cell_count
        if v.size != n:
            raise ProfileError("per_cell_values length must equal cell_count")
        if not (v[0] == v[-1] == self.edge_critical_current):
            raise ProfileError("taper endpoints must equal edge_critical_current")
        if not np.isclose(v.min(), self.mid_critical_current, rtol=1e-12, atol=0.0):
            raise ProfileError("taper minimum must equal mid_critical_current")
        if not np.allclose(v, v[::-1], rtol=1e-12, atol=0.0):
            raise ProfileError("taper must be symmetric about mid-device")
        half = v[: (n + 1) // 2]
        if np.any(np.diff(half) > 1e-15 * v[0]):
            raise ProfileError("taper must be monotone non-increasing toward mid-device")

    @property
    def values(self):
        return np.asarray(self.per_cell_values, dtype=float)


def make_taper(cell_count, edge_critical_current, mid_critical_current,
               shape="raised-cosine", per_cell_values=None):
    """Build a symmetric critical-current taper with maxima at the ends.

    ``shape`` is one of ``linear``, ``raised-cosine``, or ``user-table``
    (in which case ``per_cell_values`` is validated and passed through).
    """
    if cell_count < 3:
        raise ProfileError("cell_count must be >= 3")
    if not (edge_critical_current >= mid_critical_current > 0):
        raise ProfileError("need edge_I >= mid_I > 0 (taper maxima are at the ends)")
    n = cell_count
    if shape == "user-table":
        if per_cell_values is None:
            raise ProfileError("user-table taper requires per_cell_values")
        vals = np.asarray(per_cell_values, dtype=float)
    else:
        t = 2.0 * np.arange(n) / (n - 1) - 1.0  # -1 .. 1, 0 at mid-device
        if shape == "linear":
            frac = np.abs(t)
        else:  # raised-cosine
            frac = 0.5 * (1.0 - np.cos(np.pi * t))
        vals = mid_critical_current + (edge_critical_current - mid_critical_current) * frac
        # pin the central cell(s) exactly to the published mid value
        if n % 2:
            vals[n // 2] = mid_critical_current
        else:
            vals[n // 2 - 1] = vals[n // 2] = mid_critical_current
        vals[0] = vals[-1] = edge_critical_current
        vals = np.minimum(vals, vals[::-1])  # exact symmetry in floating point
    return TaperProfile(n, edge_critical_current, mid_critical_current,
                        shape, tuple(vals))


@dataclass(frozen=True)
class DeviceNetlist:
    """Complete amplifier description: ordered cells plus resonator insertions."""

    cells: tuple  # of (JunctionSpec, StubSpec)
    resonators: tuple  # of (cell_index, ResonatorSpec)
    target_impedance: float = 50.0  # [ohm]
    loss_tangent: float = 0.0

    def __post_init__(self):
        if not self.cells:
            raise ConfigurationError("netlist needs at least one cell")
        if self.loss_tangent < 0:
            raise ConfigurationError("loss_tangent must be >= 0")
        idx = [i for i, _ in self.resonators]
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ConfigurationError("resonator cell indices must be strictly increasing")
        if idx and not (0 <= idx[0] and idx[-1] < len(self.cells)):
            raise ConfigurationError("resonator cell index out of range")

    @property
    def cell_count(self):
        return len(self.cells)

    def with_loss_tangent(self, loss_tangent):
        return DeviceNetlist(self.cells, self.resonators,
                             self.target_impedance, loss_tangent)

    def to_dict(self):
        return {
            "target_impedance_ohm": self.target_impedance,
            "loss_tangent": self.loss_tangent,
            "cells": [
                {
                    "critical_current_A": j.critical_current,
                    "junction_capacitance_F": j.junction_capacitance,
                    "junctions_per_cell": j.junctions_per_cell,
                    "stub_length_m": s.length,
                    "stub_wave_velocity_m_s": s.wave_velocity,
                    "stub_impedance_ohm": s.characteristic_impedance,
                }
                for j, s in self.cells
            ],
            "resonators": [
                {
                    "cell_index": i,
                    "inductance_H": r.inductance,
                    "capacitance_F": r.capacitance,
                    "coupling_capacitance_F": r.coupling_capacitance,
                    "insertion_period": r.insertion_period,
                }
                for i, r in self.resonators
            ],
        }

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        cells = tuple(
            (
                JunctionSpec(c["critical_current_A"], c["junction_capacitance_F"],
                             c["junctions_per_cell"]),
                StubSpec(c["stub_length_m"], c["stub_wave_velocity_m_s"],
                         c["stub_impedance_ohm"]),
            )
            for c in d["cells"]
        )
        resonators = tuple(
            (
                r["cell_index"],
                ResonatorSpec(r["inductance_H"], r["capacitance_F"],
                              r["coupling_capacitance_F"], r["insertion_period"]),
            )
            for r in d["resonators"]
        )
        return cls(cells, resonators, d["target_impedance_ohm"], d["loss_tangent"])

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def matched_stub_rule(target_impedance, wave_velocity, stub_impedance):
    """Stub rule keeping the per-cell image impedance at ``target_impedance``.

    The low-frequency image impedance of the ladder is sqrt(L_chain/C_stub),
    so the rule picks the stub length whose capacitance is
    C_stub = L_chain / Z_target^2.
    """

    def rule(chain_inductance):
        c_stub = chain_inductance / target_impedance**2
        return c_stub * wave_velocity * stub_impedance

    return rule


def build_device(taper: TaperProfile, stub_rule: Callable[[float], float],
                 resonator: ResonatorSpec, loss_tangent: float,
                 target_impedance: float = 50.0,
                 junctions_per_cell: int = 3,
                 junction_capacitance_rule: Callable[[float], float] | None = None,
                 stub_wave_velocity: float = 1.2e8,
                 stub_impedance: float = 50.0,
                 min_quarter_wave_freq: float = 2 * np.pi * 24e9) -> DeviceNetlist:
    """Assemble the full netlist from a taper and per-cell design rules.

    ``stub_rule`` maps the cell's junction-chain inductance to a stub
    length.  One resonator is inserted every ``resonator.insertion_period``
    cells.  A stub whose quarter-wave resonance falls below
    ``min_quarter_wave_freq`` (i.e. inside or too close to the analysis
    band) is rejected.
    """
    if junction_capacitance_rule is None:
        junction_capacitance_rule = scaled_junction_capacitance()
    cells = []
    for ic in taper.values:
        jj = JunctionSpec(ic, junction_capacitance_rule(ic), junctions_per_cell)
        length = stub_rule(jj.chain_inductance)
        stub = StubSpec(length, stub_wave_velocity, stub_impedance)
        if stub.quarter_wave_freq < min_quarter_wave_freq:
            raise ConfigurationError(
                f"stub length {length:.3e} m puts the quarter-wave resonance "
                f"at {stub.quarter_wave_freq:.3e} rad/s, below the analysis band"
            )
        cells.append((jj, stub))
    period = resonator.insertion_period
    resonators = tuple(
        (i, resonator) for i in range(period - 1, len(cells), period)
    )
    return DeviceNetlist(tuple(cells), resonators, target_impedance, loss_tangent)


def scaled_junction_capacitance(critical_current_density=1.07e7,
                                specific_capacitance=4.5e-2):
    """Junction capacitance from area, with area inferred from I_c.

    Defaults: J_c = 10.7 uA/um^2 and 45 fF/um^2.  Both are free model
    parameters (not fixed by measurement) and can be overridden.
    """

    def rule(critical_current):
        area = critical_current / critical_current_density
        return specific_capacitance * area

    return rule


# Published device targets used as the shipped defaults.
DEFAULTS = {
    "cell_count": 3008,
    "edge_critical_current": 13.1e-6,
    "mid_critical_current": 4.62e-6,
    "taper_shape": "raised-cosine",
    "target_impedance": 50.0,
    "junctions_per_cell": 3,
    "stub_wave_velocity": 1.2e8,
    "stub_impedance": 50.0,
    "resonator_frequency_hz": 8.0e9,
    "resonator_capacitance": 0.5e-12,
    "resonator_coupling_capacitance": 20.0e-15,
    "resonator_insertion_period": 8,
    "loss_tangent": 6e-5,
}


def default_device(**overrides) -> DeviceNetlist:
    """The shipped default amplifier (published cell count, taper endpoints,
    resonator spacing and center frequency; unpublished values use the
    documented model defaults)."""
    p = dict(DEFAULTS)
    unknown = set(overrides) - set(p)
    if unknown:
        raise ConfigurationError(f"unknown device parameters: {sorted(unknown)}")
    p.update(overrides)
    taper = make_taper(p["cell_count"], p["edge_critical_current"],
                       p["mid_critical_current"], p["taper_shape"])
    resonator = resonator_from_frequency(
        2 * np.pi * p["resonator_frequency_hz"],
        p["resonator_capacitance"],
        p["resonator_coupling_capacitance"],
        p["resonator_insertion_period"],
        align_gap=True,
    )
    rule = matched_stub_rule(p["target_impedance"], p["stub_wave_velocity"],
                             p["stub_impedance"])
    return build_device(taper, rule, resonator, p["loss_tangent"],
                        target_impedance=p["target_impedance"],
                        junctions_per_cell=p["junctions_per_cell"],
                        stub_wave_velocity=p["stub_wave_velocity"],
                        stub_impedance=p["stub_impedance"])
