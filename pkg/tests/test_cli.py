"""Command-line behaviour: outputs, exit codes, determinism."""

import json
import math

import numpy as np
import pytest

import heiscurves as hc
from heiscurves.cli import main

from conftest import FIGURE1_ALPHA0


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestTensors:
    def test_heisenberg_reference_match(self, capsys):
        code, out, _ = run(capsys, "tensors", "--m", "0", "--l", "1")
        assert code == 0
        assert out.count("MATCH") == 6  # 3 Riemann + 3 Ricci reference values
        assert "MISMATCH" not in out
        assert "R_1212 = -0.75" in out
        assert "PASS" in out

    def test_constant_curvature_member(self, capsys):
        code, out, _ = run(capsys, "tensors", "--m", "1", "--l", "2", "--point", "0,0,0")
        assert code == 0
        for pair in ("K(e1, e2)", "K(e1, e3)", "K(e2, e3)"):
            line = next(l for l in out.splitlines() if pair in l)
            assert float(line.split("=")[1]) == pytest.approx(1.0, abs=1e-12)

    def test_left_invariance_of_tables(self, capsys, tmp_path):
        # frame-basis tables at another point coincide with the origin tables
        j0 = tmp_path / "origin.json"
        j1 = tmp_path / "moved.json"
        run(capsys, "tensors", "--m", "0", "--l", "1", "--json", str(j0))
        run(capsys, "tensors", "--m", "0", "--l", "1", "--point", "1,1,0", "--json", str(j1))
        a = json.loads(j0.read_text())
        b = json.loads(j1.read_text())
        assert np.abs(np.array(a["connection"]) - np.array(b["connection"])).max() < 1e-15
        assert np.abs(np.array(a["riemann"]) - np.array(b["riemann"])).max() < 1e-15


class TestGenerateVerify:
    def _generate(self, capsys, tmp_path, *extra):
        out = tmp_path / "curve"
        code, stdout, _ = run(
            capsys,
            "generate",
            "--sin-alpha0", repr(1.0 / math.sqrt(10.0)),
            "--a", "1", "--b", "1", "--c", "1",
            "--samples", "501",
            "--s1", repr(2.0 * math.pi),
            "--out", str(out),
            *extra,
        )
        return code, stdout, out

    def test_roundtrip_exit_zero(self, capsys, tmp_path):
        code, stdout, out = self._generate(capsys, tmp_path)
        assert code == 0
        assert "nongeodesic_biharmonic" in stdout
        code2, stdout2, _ = run(capsys, "verify", f"{out}.csv")
        assert code2 == 0
        assert "verdict: nongeodesic_biharmonic" in stdout2

    def test_outputs_exist_and_parse(self, capsys, tmp_path):
        _, _, out = self._generate(capsys, tmp_path, "--surfaces")
        frenet = json.loads((tmp_path / "curve.frenet.json").read_text())
        assert frenet["n"] == 501
        report = json.loads((tmp_path / "curve.report.json").read_text())
        assert report["max_interior_residual"] < 1e-5
        params = json.loads((tmp_path / "curve.params.json").read_text())
        assert params["family"] == "biharmonic_helix"
        cls = json.loads((tmp_path / "curve.classification.json").read_text())
        assert cls["verdict"] == "nongeodesic_biharmonic"
        cyl = (tmp_path / "curve.cylinder.csv").read_text().splitlines()
        assert cyl[0] == "u,v,x,y,z"
        hel = (tmp_path / "curve.helicoid.csv").read_text().splitlines()
        assert hel[0] == "u,v,x,y,z"

    def test_determinism(self, capsys, tmp_path):
        _, _, out_a = self._generate(capsys, tmp_path)
        (tmp_path / "second").mkdir()
        out_b = tmp_path / "second" / "curve"
        run(
            capsys,
            "generate",
            "--sin-alpha0", repr(1.0 / math.sqrt(10.0)),
            "--a", "1", "--b", "1", "--c", "1",
            "--samples", "501",
            "--s1", repr(2.0 * math.pi),
            "--out", str(out_b),
        )
        assert (tmp_path / "curve.csv").read_bytes() == (out_b.with_suffix(".csv")).read_bytes()
        assert (tmp_path / "curve.report.json").read_bytes() == (
            out_b.parent / "curve.report.json"
        ).read_bytes()

    def test_inadmissible_angle_exit_two(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "generate", "--alpha0-deg", "90", "--out", str(tmp_path / "x")
        )
        assert code == 2
        assert "cos(alpha0)^2 >= 4/5" in err

    def test_boundary_branches_identical(self, capsys, tmp_path):
        alpha = math.acos(2.0 / math.sqrt(5.0))
        outs = []
        for branch in ("plus", "minus"):
            out = tmp_path / branch
            code, _, _ = run(
                capsys,
                "generate",
                "--alpha0", repr(alpha),
                "--branch", branch,
                "--samples", "201",
                "--s1", "6.0",
                "--out", str(out),
            )
            assert code == 0
            outs.append(out)
        assert outs[0].with_suffix(".csv").read_bytes() == outs[1].with_suffix(".csv").read_bytes()

    def test_verify_b3zero_exit_one(self, capsys, tmp_path):
        spec = hc.b3zero_curve(lambda s: 0.5 + 0.3 * s, (0.0, 2.0))
        samples = hc.sample_curve(spec, 801)
        path = tmp_path / "b3zero.csv"
        hc.write_samples_csv(path, samples, include_velocity=True)
        code, out, _ = run(capsys, "verify", str(path))
        assert code == 1
        assert "verdict: not_biharmonic" in out
        tau_line = next(l for l in out.splitlines() if "tau_mean" in l)
        assert float(tau_line.split("=")[1]) == pytest.approx(-0.5, abs=1e-4)

    def test_verify_geodesic_exit_zero(self, capsys, tmp_path):
        spec = hc.geodesic_ivp(hc.HEISENBERG, [0.0, 0.0, 0.0], [0.6, 0.0, 0.8], (0.0, 20.0))
        samples = hc.sample_curve(spec, 1601)
        path = tmp_path / "geo.csv"
        hc.write_samples_csv(path, samples, include_velocity=True)
        code, out, _ = run(capsys, "verify", str(path))
        assert code == 0
        assert "verdict: geodesic" in out

    def test_verify_bad_input_exit_two(self, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("s,x,y,z\n0,0,0,0\n0.1,1,0,0\n0.05,2,0,0\n")
        code, _, err = run(capsys, "verify", str(path))
        assert code == 2
        assert "row" in err


class TestGeodesicCommand:
    def test_writes_and_reports(self, capsys, tmp_path):
        out = tmp_path / "geo"
        code, stdout, _ = run(
            capsys,
            "geodesic",
            "--point", "0,0,0",
            "--direction", "0.6,0,0.8",
            "--length", "20",
            "--samples", "801",
            "--out", str(out),
        )
        assert code == 0
        drift_line = next(l for l in stdout.splitlines() if "unit-speed drift" in l)
        drift = float(drift_line.split("=")[1].split(",")[0])
        assert drift < 1e-8
        assert (tmp_path / "geo.csv").exists()


class TestConeCommand:
    def test_direction_queries(self, capsys):
        code, out, _ = run(capsys, "cone", "--direction", "0,0,1")
        assert code == 0 and "geodesic_only" in out
        code, out, _ = run(
            capsys, "cone", "--direction", "0.31622776601683794,0,0.9486832980505138"
        )
        assert code == 0 and "biharmonic_direction" in out

    def test_sweep_prints_boundaries(self, capsys):
        code, out, _ = run(capsys, "cone", "--sweep", "100")
        assert code == 0
        assert "0.463647609" in out
        assert "2.677945045" in out
        rows = [l for l in out.splitlines() if l and l[0].isdigit()]
        assert len(rows) == 100

    def test_nonunit_direction_exit_two(self, capsys):
        code, _, err = run(capsys, "cone", "--direction", "1,1,1")
        assert code == 2
        assert "unit" in err


class TestScanCommand:
    def test_invariant_column(self, capsys):
        code, out, _ = run(capsys, "scan", "--count", "50", "--branch", "both")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("alpha0,branch,A,k,tau,B3")
        assert len(lines) > 50
        for line in lines[1:]:
            assert float(line.split(",")[-1]) == pytest.approx(0.25, abs=1e-12)

    def test_two_components_present(self, capsys):
        code, out, _ = run(capsys, "scan", "--count", "20", "--component", "both")
        angles = [float(l.split(",")[0]) for l in out.strip().splitlines()[1:]]
        assert min(angles) < 0.5 and max(angles) > 2.6
        assert not any(0.5 < a < 2.6 for a in angles)

    def test_empty_window_warns(self, capsys):
        code, out, err = run(
            capsys, "scan", "--count", "10", "--alpha-min", "1.0", "--alpha-max", "2.0"
        )
        assert code == 0
        assert len(out.strip().splitlines()) == 1  # header only
        assert "no admissible" in err

    def test_rejects_other_manifolds(self, capsys):
        code, _, err = run(capsys, "scan", "--m", "1", "--l", "2")
        assert code == 2
        assert "(m, l) = (0, 1)" in err


class TestConfigFile:
    def test_manifold_from_file_and_flag_override(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"manifold": {"m": 1.0, "l": 2.0}}))
        code, out, _ = run(capsys, "--config", str(cfg), "tensors")
        assert code == 0
        assert "m = 1, l = 2" in out
        code, out, _ = run(capsys, "--config", str(cfg), "tensors", "--m", "0", "--l", "1")
        assert code == 0
        assert "m = 0, l = 1" in out

    def test_numerics_overrides_validated(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"numerics": {"not_a_knob": 1}}))
        code, _, err = run(capsys, "--config", str(cfg), "tensors")
        assert code == 2
        assert "not_a_knob" in err

    def test_numerics_override_applies(self, capsys, tmp_path):
        # a 2nd-order stencil needs a finer grid to stay inside the system
        # tolerances; success shows the override reached the pipeline
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"numerics": {"stencil_order": 2}}))
        spec = hc.biharmonic_helix(hc.HelixParams(alpha0=FIGURE1_ALPHA0), (0.0, 2 * math.pi))
        samples = hc.sample_curve(spec, 4001)
        path = tmp_path / "h.csv"
        hc.write_samples_csv(path, samples, include_velocity=True)
        code, _, _ = run(capsys, "--config", str(cfg), "verify", str(path))
        assert code == 0


class TestNumericsFlag:
    def test_flag_override(self, capsys, tmp_path):
        spec = hc.biharmonic_helix(hc.HelixParams(alpha0=FIGURE1_ALPHA0), (0.0, 2 * math.pi))
        samples = hc.sample_curve(spec, 4001)
        path = tmp_path / "h.csv"
        hc.write_samples_csv(path, samples, include_velocity=True)
        code, _, _ = run(capsys, "--numerics", "stencil_order=2", "verify", str(path))
        assert code == 0

    def test_flag_wins_over_file(self, capsys, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"numerics": {"stencil_order": 2}}))
        code, _, _ = run(
            capsys, "--config", str(cfg), "--numerics", "stencil_order=4", "tensors"
        )
        assert code == 0

    def test_bad_flag_exit_two(self, capsys):
        code, _, err = run(capsys, "--numerics", "bogus=1", "tensors")
        assert code == 2
        assert "bogus" in err
