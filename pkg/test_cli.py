"""Tests for the command-line front end and its run configuration"""

import json

import numpy as np
import pandas as pd
import pytest
from pydantic import ValidationError

from app.cli import EXIT_FAILED_CHECKS, EXIT_OK, EXIT_USAGE, main
from src.hardy.closed_forms import Q_MAX
from src.utils.config import DEFAULTS, RunConfig
from src.utils.errors import InvalidSpinError
from src.utils.io import complex_pairs, pairs_to_complex


class TestRunConfig:

    def test_defaults(self):
        cfg = RunConfig(subcommand='optimize')
        assert cfg.seed == DEFAULTS['seed'] == 20240611
        assert cfg.grid == 64
        assert cfg.tol_zero == 1e-18
        assert cfg.tol_pos == 1e-12
        assert cfg.kappa == 1e6
        assert cfg.restarts == 200
        assert cfg.iterations == 500
        assert cfg.threads >= 1
        assert cfg.output_format == 'json'
        assert RunConfig(subcommand='surface').output_format == 'csv'

    def test_degrees_become_radians(self):
        cfg = RunConfig(subcommand='state', theta1=90, theta2=45, phi1=180)
        assert cfg.theta1 == pytest.approx(np.pi / 2)
        assert cfg.theta2 == pytest.approx(np.pi / 4)
        assert cfg.phi1 == pytest.approx(np.pi)

    def test_radians_are_kept(self):
        cfg = RunConfig(subcommand='state', theta1=1.2, radians=True)
        assert cfg.theta1 == 1.2

    def test_spin_is_normalized(self):
        cfg = RunConfig(subcommand='state', j='1.5')
        assert cfg.j == '3/2'
        assert cfg.spin.two_j == 3

    @pytest.mark.parametrize("kwargs", [
        {'j': '1/3'},
        {'grid': 1},
        {'threads': 0},
        {'tol_zero': 0.0},
        {'tol_pos': -1e-3},
        {'format': 'xml'},
        {'suite': 'everything'},
        {'log_level': 'chatty'},
        {'check_tol': 0.0},
        {'theta1': 30.0},
    ])
    def test_rejects(self, kwargs):
        with pytest.raises(ValidationError):
            RunConfig(subcommand='verify', **kwargs)

    def test_spin_defaults_to_half(self):
        cfg = RunConfig(subcommand='verify')
        assert cfg.j is None
        assert cfg.spin.label == '1/2'

    def test_optimize_grid_minimum(self):
        RunConfig(subcommand='optimize', grid=16)
        with pytest.raises(ValidationError):
            RunConfig(subcommand='optimize', grid=15)

    def test_surface_spin_limit(self):
        RunConfig(subcommand='surface', j='4')
        with pytest.raises(ValidationError):
            RunConfig(subcommand='surface', j='9/2')

    def test_spin_errors_are_value_errors(self):
        with pytest.raises(ValueError):
            RunConfig(subcommand='state', j='0')
        assert issubclass(InvalidSpinError, ValueError)


def test_complex_pairs():
    values = np.array([1 + 2j, -0.5j])
    assert complex_pairs(values) == [[1.0, 2.0], [0.0, -0.5]]
    np.testing.assert_array_equal(pairs_to_complex(complex_pairs(values)), values)


class TestSurface:

    def test_grid_csv(self, tmp_path):
        out = tmp_path / "q.csv"
        assert main(["surface", "--j", "1/2", "--grid", "4", "--out", str(out), "--quiet"]) == EXIT_OK
        df = pd.read_csv(out)
        assert list(df.columns) == ["theta1", "theta2", "q"]
        assert len(df) == 16
        assert df["q"].max() <= Q_MAX

    def test_diagonal_has_closed_form(self, tmp_path):
        out = tmp_path / "diag.csv"
        assert main(["surface", "--j", "2", "--grid", "9", "--diagonal", "--out", str(out)]) == EXIT_OK
        df = pd.read_csv(out)
        assert len(df) == 9
        np.testing.assert_allclose(df["q"], df["q_closed_form"], atol=1e-9)
        assert (df["theta1"] == df["theta2"]).all()

    def test_json_rows(self, tmp_path):
        out = tmp_path / "q.json"
        assert main(["surface", "--j", "1", "--grid", "3", "--format", "json", "--out", str(out)]) == EXIT_OK
        rows = json.loads(out.read_text())["rows"]
        assert len(rows) == 9
        assert set(rows[0]) == {"theta1", "theta2", "q"}

    def test_byte_identical_reruns(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["surface", "--j", "3/2", "--grid", "6", "--quiet"]
        assert main(args + ["--out", str(first), "--threads", "1"]) == EXIT_OK
        assert main(args + ["--out", str(second), "--threads", "3"]) == EXIT_OK
        assert first.read_bytes() == second.read_bytes()

    def test_csv_to_stdout(self, capsys):
        assert main(["surface", "--j", "1/2", "--grid", "2"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "theta1,theta2,q"
        assert len(lines) == 5

    @pytest.mark.parametrize("args", [
        ["surface", "--j", "9/2", "--grid", "4"],
        ["surface", "--j", "1/3"],
        ["surface", "--grid", "1"],
        ["state", "--j", "1", "--theta1", "0"],
        ["verify", "--state", "does/not/exist.json"],
    ])
    def test_usage_errors(self, args):
        assert main(args) == EXIT_USAGE


class TestOptimize:

    def test_spin_half(self, tmp_path):
        out = tmp_path / "opt.json"
        assert main(["optimize", "--j", "1/2", "--grid", "16", "--out", str(out), "--quiet"]) == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["j"] == "1/2"
        assert payload["q_star"] == pytest.approx(Q_MAX, abs=1e-9)
        assert payload["gap"] < 1e-6
        assert not payload["gap_flagged"]
        assert payload["theta_star_degrees"][0] == pytest.approx(76.35, abs=0.05)
        assert payload["cos_theta_star"][0] == pytest.approx(-2 + np.sqrt(5), abs=1e-6)
        assert payload["q_reevaluated"] == pytest.approx(payload["q_star"], abs=1e-10)
        assert max(abs(r) for r in payload["residuals"]) < 1e-5


class TestState:

    def test_default_angles_are_optimal(self, tmp_path):
        out = tmp_path / "state.json"
        assert main(["state", "--j", "1/2", "--out", str(out)]) == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["q"] == pytest.approx(Q_MAX, abs=1e-12)
        assert len(payload["amplitudes"]) == 4
        assert payload["hardy_conditions_passed"]
        assert len(payload["condition_probabilities"]) == 4
        assert sum(payload["schmidt_spectrum"]) == pytest.approx(1.0)
        assert list(payload["invariants"]) == ["I"]

    def test_degrees_and_radians_agree(self, tmp_path):
        deg, rad = tmp_path / "deg.json", tmp_path / "rad.json"
        assert main(["state", "--j", "1", "--theta1", "90", "--theta2", "90", "--out", str(deg)]) == EXIT_OK
        assert main(["state", "--j", "1", "--theta1", str(np.pi / 2), "--theta2", str(np.pi / 2),
                     "--radians", "--out", str(rad)]) == EXIT_OK
        q_deg = json.loads(deg.read_text())["q"]
        assert q_deg == pytest.approx(2.25 / 28, abs=1e-12)
        assert json.loads(rad.read_text())["q"] == pytest.approx(q_deg, abs=1e-15)

    def test_csv_amplitudes(self, tmp_path):
        out = tmp_path / "state.csv"
        assert main(["state", "--j", "1", "--format", "csv", "--out", str(out)]) == EXIT_OK
        df = pd.read_csv(out)
        assert list(df.columns) == ["m_a", "m_b", "re", "im"]
        assert (df["re"] ** 2 + df["im"] ** 2).sum() == pytest.approx(1.0)


class TestVerify:

    def test_state_file_roundtrip(self, tmp_path):
        state, report = tmp_path / "state.json", tmp_path / "report.json"
        assert main(["state", "--j", "3/2", "--theta1", "100", "--theta2", "130", "--phi2", "40",
                     "--out", str(state)]) == EXIT_OK
        assert main(["verify", "--state", str(state), "--out", str(report)]) == EXIT_OK
        payload = json.loads(report.read_text())
        assert payload["passed"]
        assert payload["suites"][0]["suite"] == "state-file"

    def test_tampered_state_file_fails(self, tmp_path):
        state = tmp_path / "state.json"
        assert main(["state", "--j", "1/2", "--out", str(state)]) == EXIT_OK
        data = json.loads(state.read_text())
        data["q"] = 0.5
        state.write_text(json.dumps(data))
        assert main(["verify", "--state", str(state), "--out", str(tmp_path / "r.json")]) == EXIT_FAILED_CHECKS

    def test_single_suite(self, tmp_path):
        out = tmp_path / "report.json"
        assert main(["verify", "--suite", "appendix", "--out", str(out), "--quiet"]) == EXIT_OK
        payload = json.loads(out.read_text())
        assert [s["suite"] for s in payload["suites"]] == ["appendix"]
        assert payload["summary"]["failed_checks"] == 0

    def test_injected_tolerance_fails(self, tmp_path):
        out = tmp_path / "report.json"
        code = main(["verify", "--suite", "hardy-conditions", "--tol-pos", "0.5", "--out", str(out), "--quiet"])
        assert code == EXIT_FAILED_CHECKS
        assert not json.loads(out.read_text())["passed"]

    def test_injected_error_threshold_fails(self, tmp_path):
        out = tmp_path / "report.json"
        code = main(["verify", "--suite", "oracle-triangle", "--check-tol", "1e-30", "--out", str(out), "--quiet"])
        assert code == EXIT_FAILED_CHECKS
        payload = json.loads(out.read_text())
        failed = [c["check"] for s in payload["suites"] for c in s["checks"] if not c["valid"]]
        assert "pipeline vs closed form j=1/2" in failed
        assert payload["check_tol"] == 1e-30

    def test_spin_restricts_suite(self, tmp_path):
        out = tmp_path / "report.json"
        assert main(["verify", "--suite", "hardy-conditions", "--j", "3/2", "--out", str(out), "--quiet"]) == EXIT_OK
        names = [c["check"] for s in json.loads(out.read_text())["suites"] for c in s["checks"]]
        assert names == ["Hardy conditions j=3/2", "psi_max maximizes q in the Hardy subspace j=3/2"]

    @pytest.mark.slow
    def test_no_go_for_one_spin(self, tmp_path):
        out = tmp_path / "report.json"
        main(["verify", "--suite", "no-go", "--j", "1/2", "--restarts", "20", "--out", str(out), "--quiet"])
        checks = json.loads(out.read_text())["suites"][0]["checks"]
        assert all(c["check"].endswith("j=1/2") for c in checks)
        penalty = next(c for c in checks if c["check"] == "max-ent penalty search j=1/2")
        assert penalty["valid"]
        assert penalty["value"] < 1e-8

    @pytest.mark.parametrize("args", [
        ["verify", "--theta1", "30"],
        ["verify", "--phi2", "10"],
        ["verify", "--suite", "appendix", "--j", "1/2"],
        ["optimize", "--grid", "8"],
    ])
    def test_rejected_combinations(self, args):
        assert main(args) == EXIT_USAGE
