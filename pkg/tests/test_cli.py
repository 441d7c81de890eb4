import json
import os

import numpy as np
import pytest

import twpasim as tw
from twpasim.cli import (
    default_config_text,
    device_from_values,
    parse_device_config,
    run,
)
from twpasim.constants import K_B
from twpasim.errors import ConfigurationError
from twpasim.gain import dbm_to_watts, watts_to_dbm


def read_json(outdir):
    with open(os.path.join(outdir, "results.json")) as fh:
        return json.load(fh)


class TestDeviceConfig:
    def test_shipped_config_matches_library_default(self):
        values = parse_device_config(default_config_text())
        dev = device_from_values(values)
        assert dev.to_json() == tw.default_device().to_json()

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigurationError):
            parse_device_config("[device]\nwarp_factor = 9\n")

    def test_missing_section_rejected(self):
        with pytest.raises(ConfigurationError):
            parse_device_config("[dev]\ncell_count = 8\n")

    def test_bad_value_rejected(self):
        with pytest.raises(ConfigurationError):
            parse_device_config("[device]\ncell_count = lots\n")

    def test_taper_table_override(self):
        table = np.array([10.0, 8.0, 6.0, 6.0, 8.0, 10.0]) * 1e-6
        text = "[device]\ntaper_table = " + ",".join(
            repr(float(v)) for v in table)
        dev = device_from_values(parse_device_config(text))
        assert dev.cell_count == 6
        ic = [jj.critical_current for jj, _ in dev.cells]
        assert ic[0] == pytest.approx(10e-6, rel=1e-12)


class TestExitCodes:
    def test_unknown_command(self, capsys):
        status, bundle = run(["frobnicate"])
        assert status == 2 and bundle is None

    def test_missing_required_argument(self, capsys):
        status, bundle = run(["fit-loss"])
        assert status == 2 and bundle is None

    def test_missing_data_file_names_path(self, tmp_path, capsys):
        status, bundle = run(["fit-loss", "--data", "/no/such/file.csv",
                              "--out", str(tmp_path / "o")])
        assert status == 2 and bundle is None
        assert "/no/such/file.csv" in capsys.readouterr().err

    def test_corrupted_config_no_partial_output(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("[device]\ncell_count = banana\n")
        out = tmp_path / "out"
        status, bundle = run(["simulate-linear", "--device", str(cfg),
                              "--out", str(out), "--points", "11"])
        assert status == 2 and bundle is None
        assert not out.exists()

    def test_bad_pump_fraction_is_config_error(self, tmp_path, capsys):
        status, bundle = run(["simulate-gain", "--pump-fraction", "1.5",
                              "--points", "3",
                              "--out", str(tmp_path / "o")])
        assert status == 2 and bundle is None

    def test_help_exits_zero(self, capsys):
        status, bundle = run(["--help"])
        assert status == 0 and bundle is None


class TestSimulateLinear:
    def test_bundle_contract(self, tmp_path, capsys):
        out = tmp_path / "lin"
        status, bundle = run(["simulate-linear", "--fmin", "7.5e9",
                              "--fmax", "8.5e9", "--points", "201",
                              "--out", str(out)])
        assert status == 0
        for name in ("results.json", "summary.txt", "linear.csv"):
            assert (out / name).exists()
        lines = (out / "linear.csv").read_text().splitlines()
        assert lines[0] == "freq_hz,s21_db,s21_phase_rad,s11_db"
        assert len(lines) == 202
        res = read_json(out)
        assert res["command"] == "simulate-linear"
        assert res["results"]["bandgap_center_hz"] == pytest.approx(
            8.0e9, abs=0.1e9)
        assert "config_sha256" in res["provenance"]
        assert "version" in res["provenance"]


class TestEfficiency:
    def write_budget(self, path, freq=6.59e9, rbw=1e4, g_amp=104.2,
                     g_off=1e4, t_on=0.378, t_off=3.99, s_a_dbm=-110.0):
        s_a = dbm_to_watts(s_a_dbm)
        s_d_off = s_a * g_off
        s_d_on = s_d_off * g_amp
        n_d_on = (s_d_on / s_a) * K_B * t_on * rbw
        n_d_off = (s_d_off / s_a) * K_B * t_off * rbw
        rows = [
            f"A,on,{s_a_dbm!r},,{freq!r}",
            f"A,off,{s_a_dbm!r},,{freq!r}",
            f"D,on,{float(watts_to_dbm(s_d_on))!r},"
            f"{float(watts_to_dbm(n_d_on))!r},{freq!r}",
            f"D,off,{float(watts_to_dbm(s_d_off))!r},"
            f"{float(watts_to_dbm(n_d_off))!r},{freq!r}",
        ]
        path.write_text("plane,state,signal_dbm,noise_dbm,freq_hz\n"
                        + "\n".join(rows) + "\n")

    def test_published_operating_point(self, tmp_path, capsys):
        budget = tmp_path / "budget.csv"
        self.write_budget(budget)
        out = tmp_path / "eff"
        status, bundle = run(["efficiency", "--budget", str(budget),
                              "--out", str(out)])
        assert status == 0
        res = read_json(out)["results"]
        assert res["gain_db"] == pytest.approx(10 * np.log10(104.2), abs=1e-6)
        assert res["eta_sys_on"] == pytest.approx(0.8367, abs=2e-3)
        assert res["eta_sys_off"] == pytest.approx(0.07927, abs=2e-4)
        assert res["eta_intrinsic_normalized"] == pytest.approx(0.9217, abs=2e-3)
        assert res["snr_improvement_db"] == pytest.approx(10.235, abs=5e-3)
        assert not res["nonphysical"]

    def test_wrong_header_rejected(self, tmp_path, capsys):
        budget = tmp_path / "budget.csv"
        budget.write_text("plane,state,sig,noise,freq\nA,on,1,2,3\n")
        status, bundle = run(["efficiency", "--budget", str(budget),
                              "--out", str(tmp_path / "o")])
        assert status == 2

    def test_missing_row_rejected(self, tmp_path, capsys):
        budget = tmp_path / "budget.csv"
        budget.write_text("plane,state,signal_dbm,noise_dbm,freq_hz\n"
                          "A,on,-110,,6.59e9\n")
        status, bundle = run(["efficiency", "--budget", str(budget),
                              "--out", str(tmp_path / "o")])
        assert status == 2


class TestSynthDeterminism:
    def test_same_seed_byte_identical(self, tmp_path, capsys):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            status, _ = run(["synth", "--kind", "resonator", "--seed", "7",
                             "--out", str(out)])
            assert status == 0
        names = sorted(os.listdir(out1))
        assert names == sorted(os.listdir(out2))
        for name in names:
            assert (out1 / name).read_bytes() == (out2 / name).read_bytes()

    def test_different_seed_differs(self, tmp_path, capsys):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        run(["synth", "--kind", "resonator", "--seed", "1", "--out", str(out1)])
        run(["synth", "--kind", "resonator", "--seed", "2", "--out", str(out2)])
        assert (out1 / "resonator_spectrum.csv").read_bytes() \
            != (out2 / "resonator_spectrum.csv").read_bytes()


class TestSynthFitRoundtrips:
    def test_resonator(self, tmp_path, capsys):
        synth_out = tmp_path / "synth"
        run(["synth", "--kind", "resonator", "--seed", "3",
             "--out", str(synth_out)])
        truth = read_json(synth_out)["results"]["truth"]
        fit_out = tmp_path / "fit"
        status, _ = run(["fit-resonator",
                         "--data", str(synth_out / "resonator_spectrum.csv"),
                         "--out", str(fit_out)])
        assert status == 0
        res = read_json(fit_out)["results"]
        assert res["f_r_hz"] == pytest.approx(truth["f_r_hz"], rel=1e-6)
        assert res["q_loaded"] == pytest.approx(truth["q_loaded"], rel=0.01)
        assert res["q_coupling"] == pytest.approx(truth["q_coupling"], rel=0.01)

    def test_wqed(self, tmp_path, capsys):
        synth_out = tmp_path / "synth"
        run(["synth", "--kind", "wqed", "--seed", "4", "--out", str(synth_out)])
        truth = read_json(synth_out)["results"]["truth"]
        fit_out = tmp_path / "fit"
        status, _ = run(["fit-wqed",
                         "--data", str(synth_out / "wqed_surface.csv"),
                         "--qubit-freq", repr(truth["qubit_freq_hz"]),
                         "--out", str(fit_out)])
        assert status == 0
        res = read_json(fit_out)["results"]
        assert res["gamma1_hz"] == pytest.approx(truth["gamma1_hz"], rel=0.02)
        assert res["gamma2_hz"] == pytest.approx(truth["gamma2_hz"], rel=0.02)
        assert res["attenuation_db"] == pytest.approx(
            truth["attenuation_db"], abs=0.15)
        assert (fit_out / "calibrated_powers.csv").exists()

    def test_mid(self, tmp_path, capsys):
        synth_out = tmp_path / "synth"
        run(["synth", "--kind", "mid", "--seed", "5", "--out", str(synth_out)])
        truth = read_json(synth_out)["results"]["truth"]
        fit_out = tmp_path / "fit"
        status, _ = run(["fit-mid",
                         "--data", str(synth_out / "mid_sweep.csv"),
                         "--chi", repr(truth["chi_hz"]),
                         "--kappa", repr(truth["kappa_hz"]),
                         "--kappa-ext", repr(truth["kappa_ext_hz"]),
                         "--out", str(fit_out)])
        assert status == 0
        res = read_json(fit_out)["results"]
        assert res["c_epsilon"] == pytest.approx(truth["c_epsilon"], rel=0.02)
        assert (fit_out / "calibrated_drive.csv").exists()

    def test_loss(self, tmp_path, capsys):
        synth_out = tmp_path / "synth"
        run(["synth", "--kind", "loss", "--seed", "6", "--out", str(synth_out)])
        truth = read_json(synth_out)["results"]["truth"]
        fit_out = tmp_path / "fit"
        status, _ = run(["fit-loss",
                         "--data", str(synth_out / "insertion_loss.csv"),
                         "--out", str(fit_out)])
        assert status == 0
        res = read_json(fit_out)["results"]
        assert res["loss_tangent_eff"] == pytest.approx(
            truth["loss_tangent"], rel=0.05)
        assert res["offset_db"] == pytest.approx(truth["offset_db"], abs=0.02)


class TestPaperReport:
    def test_fast_checks_all_pass(self, tmp_path, capsys):
        out = tmp_path / "report"
        status, bundle = run(["paper-report", "--out", str(out)])
        assert status == 0
        res = read_json(out)["results"]
        assert res["all_passed"]
        names = {c["name"] for c in res["checks"]}
        assert {"system_efficiency_on", "intrinsic_efficiency",
                "snr_improvement_db", "lossless_unitarity_error",
                "bandgap_center_ghz", "loss_fit_tangent",
                "budget_identity_rel_error"} <= names
        text = (out / "summary.txt").read_text()
        assert "overall: PASS" in text
        assert "FAIL" not in text.replace("PASS", "")
