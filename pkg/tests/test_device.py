import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import twpasim as tw
from twpasim.device import DEFAULTS, stub_for_capacitance
from twpasim.errors import (
    ConfigurationError,
    DomainError,
    ProfileError,
    SingularityError,
)


class TestJosephsonInductance:
    def test_mid_current_value(self):
        # independent arithmetic: Phi0 / (2 pi I_c)
        assert tw.josephson_inductance(4.62e-6) == pytest.approx(7.124e-11, rel=1e-3)

    def test_edge_current_value(self):
        assert tw.josephson_inductance(13.1e-6) == pytest.approx(2.512e-11, rel=1e-3)

    def test_inverse_proportionality(self):
        assert tw.josephson_inductance(2e-6) == pytest.approx(
            2.0 * tw.josephson_inductance(4e-6), rel=1e-14)

    def test_nonpositive_current_rejected(self):
        with pytest.raises(DomainError):
            tw.josephson_inductance(0.0)
        with pytest.raises(DomainError):
            tw.josephson_inductance(-1e-6)


class TestStubImpedance:
    def stub(self):
        return tw.StubSpec(length=1e-3, wave_velocity=1.2e8,
                           characteristic_impedance=50.0)

    def test_quarter_wave_short(self):
        s = self.stub()
        z = tw.stub_impedance_exact(s.quarter_wave_freq, s)
        assert abs(z) < 1e-9

    def test_half_quarter_wave(self):
        s = self.stub()
        z = tw.stub_impedance_exact(s.quarter_wave_freq / 2.0, s)
        assert z == pytest.approx(-50j, rel=1e-12)

    def test_low_frequency_capacitive(self):
        s = self.stub()
        z = tw.stub_impedance_exact(1e-4 * s.quarter_wave_freq, s)
        assert abs(z) > 1e5
        assert np.angle(z) == pytest.approx(-np.pi / 2, abs=1e-6)

    def test_pole_guard(self):
        # cot poles sit at even multiples of the quarter-wave frequency
        s = self.stub()
        with pytest.raises(SingularityError):
            tw.stub_impedance_exact(2.0 * s.quarter_wave_freq, s)

    def test_lc_approx_values(self):
        c, l = tw.stub_lc_approx(self.stub())
        assert c == pytest.approx(166.7e-15, rel=1e-3)
        assert l == pytest.approx(0.139e-9, rel=1e-2)

    def test_lc_approx_linear_in_length(self):
        s1 = self.stub()
        s2 = tw.StubSpec(2e-3, 1.2e8, 50.0)
        c1, l1 = tw.stub_lc_approx(s1)
        c2, l2 = tw.stub_lc_approx(s2)
        assert c2 == pytest.approx(2 * c1, rel=1e-14)
        assert l2 == pytest.approx(2 * l1, rel=1e-14)

    def test_lc_approx_convergence(self):
        s = self.stub()
        wq = s.quarter_wave_freq
        c, l = tw.stub_lc_approx(s)
        w = np.linspace(1e-3, 0.3, 500) * wq
        exact = tw.stub_impedance_exact(w, s)
        approx = 1j * w * l + 1.0 / (1j * w * c)
        rel = np.abs(approx - exact) / np.abs(exact)
        assert rel.max() < 0.01
        assert rel[w <= 0.1 * wq].max() < 0.001


class TestTaper:
    def test_paper_endpoints(self):
        t = tw.make_taper(3008, 13.1e-6, 4.62e-6, "raised-cosine")
        v = t.values
        assert v[0] == v[-1] == 13.1e-6
        assert v.min() == 4.62e-6
        assert v[1503] == 4.62e-6  # mid-device cell

    def test_flat_degenerate(self):
        t = tw.make_taper(3, 5e-6, 5e-6, "linear")
        assert np.all(t.values == 5e-6)

    def test_edge_below_mid_rejected(self):
        with pytest.raises(ProfileError):
            tw.make_taper(100, 4e-6, 5e-6)

    def test_user_table_roundtrip(self):
        base = tw.make_taper(101, 10e-6, 5e-6, "linear")
        t = tw.make_taper(101, 10e-6, 5e-6, "user-table",
                          per_cell_values=base.values)
        assert np.array_equal(t.values, base.values)

    def test_asymmetric_user_table_rejected(self):
        vals = np.linspace(10e-6, 5e-6, 11)
        with pytest.raises(ProfileError):
            tw.make_taper(11, 10e-6, 5e-6, "user-table", per_cell_values=vals)

    @given(n=st.integers(3, 400),
           shape=st.sampled_from(["linear", "raised-cosine"]),
           edge=st.floats(1e-6, 2e-5),
           frac=st.floats(0.1, 1.0))
    @settings(max_examples=60, deadline=None)
    def test_invariants_hold_for_any_shape(self, n, shape, edge, frac):
        mid = edge * frac
        t = tw.make_taper(n, edge, mid, shape)
        v = t.values
        assert v[0] == v[-1] == edge
        assert np.isclose(v.min(), mid, rtol=1e-12)
        assert np.array_equal(v, v[::-1])
        half = v[: (n + 1) // 2]
        assert np.all(np.diff(half) <= 1e-15 * edge)


class TestResonator:
    def test_bare_resonance_consistency(self):
        r = tw.resonator_from_frequency(2 * np.pi * 8e9, 0.5e-12, 9e-15)
        assert r.resonant_frequency == pytest.approx(2 * np.pi * 8e9, rel=1e-12)

    def test_gap_alignment_uses_coupling(self):
        r = tw.resonator_from_frequency(2 * np.pi * 8e9, 0.5e-12, 20e-15,
                                        align_gap=True)
        assert r.gap_frequency == pytest.approx(2 * np.pi * 8e9, rel=1e-12)
        assert r.resonant_frequency > 2 * np.pi * 8e9


class TestBuildDevice:
    def test_paper_defaults(self, device):
        assert device.cell_count == 3008
        assert len(device.resonators) == 376
        idx = [i for i, _ in device.resonators]
        assert np.all(np.diff(idx) == 8)
        r = device.resonators[0][1]
        assert r.gap_frequency == pytest.approx(2 * np.pi * 8e9, rel=1e-9)

    def test_single_cell_device(self):
        taper = tw.make_taper(3, 13.1e-6, 13.1e-6, "linear")
        rule = tw.matched_stub_rule(50.0, 1.2e8, 50.0)
        res = tw.resonator_from_frequency(2 * np.pi * 8e9, 0.5e-12, 9e-15)
        dev = tw.build_device(taper, rule, res, 0.0)
        assert dev.cell_count == 3

    def test_image_impedance_within_5pct(self, device):
        for jj, stub in device.cells[::97]:
            c_stub, _ = tw.stub_lc_approx(stub)
            z_img = np.sqrt(jj.chain_inductance / c_stub)
            assert abs(z_img - 50.0) / 50.0 < 0.05

    def test_deterministic_serialization(self):
        a = tw.default_device().to_json()
        b = tw.default_device().to_json()
        assert a == b

    def test_json_roundtrip(self, small_device):
        text = small_device.to_json()
        back = tw.DeviceNetlist.from_json(text)
        assert back.to_json() == text
        assert back.cell_count == small_device.cell_count

    def test_quarter_wave_guard(self):
        # a stub rule demanding huge capacitance pushes the quarter-wave
        # resonance into the analysis band and must be rejected
        taper = tw.make_taper(8, 13.1e-6, 4.62e-6)
        res = tw.resonator_from_frequency(2 * np.pi * 8e9, 0.5e-12, 9e-15)
        big = tw.matched_stub_rule(5.0, 1.2e8, 50.0)
        with pytest.raises(ConfigurationError):
            tw.build_device(taper, big, res, 0.0)

    def test_unknown_override_rejected(self):
        with pytest.raises(ConfigurationError):
            tw.default_device(not_a_parameter=1.0)

    def test_defaults_are_json_safe(self):
        json.dumps({k: v for k, v in DEFAULTS.items()})


class TestStubForCapacitance:
    def test_inverse_of_lc_approx(self):
        stub = tw.StubSpec(1e-3, 1.2e8, 50.0)
        c, _ = tw.stub_lc_approx(stub)
        again = stub_for_capacitance(c, 1.2e8, 50.0)
        assert again.length == pytest.approx(1e-3, rel=1e-12)
