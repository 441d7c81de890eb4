"""Frequency-indexed complex response data and its CSV round trip.

CSV layout is header-declared: either ``frequency_hz,re,im`` or
``frequency_hz,magnitude_db,phase_rad``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class ComplexSpectrum:
    """Complex response sampled on a strictly increasing frequency grid."""

    frequencies: np.ndarray  # [Hz]
    values: np.ndarray  # complex
    reference_impedance: float = 50.0  # [ohm]

    def __post_init__(self):
        f = np.asarray(self.frequencies, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if f.shape != v.shape or f.ndim != 1:
            raise DomainError("frequencies and values must be 1-d arrays of equal length")
        if np.any(np.diff(f) <= 0):
            raise DomainError("frequencies must be strictly increasing")
        object.__setattr__(self, "frequencies", f)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.frequencies.size

    @property
    def magnitude_db(self):
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(np.abs(self.values))

    @property
    def phase_rad(self):
        return np.angle(self.values)

    def to_csv(self, path_or_buf, polar=False):
        close = False
        if isinstance(path_or_buf, (str, bytes)):
            fh = open(path_or_buf, "w", newline="")
            close = True
        else:
            fh = path_or_buf
        try:
            w = csv.writer(fh)
            if polar:
                w.writerow(["frequency_hz", "magnitude_db", "phase_rad"])
                for f, m, p in zip(self.frequencies, self.magnitude_db, self.phase_rad):
                    w.writerow([repr(float(f)), repr(float(m)), repr(float(p))])
            else:
                w.writerow(["frequency_hz", "re", "im"])
                for f, v in zip(self.frequencies, self.values):
                    w.writerow([repr(float(f)), repr(float(v.real)), repr(float(v.imag))])
        finally:
            if close:
                fh.close()

    @classmethod
    def from_csv(cls, path_or_buf, reference_impedance=50.0):
        close = False
        if isinstance(path_or_buf, (str, bytes)):
            fh = open(path_or_buf, "r", newline="")
            close = True
        else:
            fh = path_or_buf
        try:
            rows = list(csv.reader(fh))
        finally:
            if close:
                fh.close()
        header = [h.strip() for h in rows[0]]
        data = np.array([[float(x) for x in r] for r in rows[1:] if r], dtype=float)
        if header == ["frequency_hz", "re", "im"]:
            vals = data[:, 1] + 1j * data[:, 2]
        elif header == ["frequency_hz", "magnitude_db", "phase_rad"]:
            vals = 10.0 ** (data[:, 1] / 20.0) * np.exp(1j * data[:, 2])
        else:
            raise DomainError(f"unrecognized spectrum CSV header: {header}")
        return cls(data[:, 0], vals, reference_impedance)

    def to_csv_string(self, polar=False):
        buf = io.StringIO()
        self.to_csv(buf, polar=polar)
        return buf.getvalue()
