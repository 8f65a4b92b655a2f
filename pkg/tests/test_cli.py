import json
import math
import subprocess
import sys

import numpy as np
import pytest

from sgweyl.cli import main
from sgweyl.serialize import read_csv


def run(args):
    return main(list(args))


class TestCoeffs:
    def test_closed_d2(self, tmp_path, capsys):
        out = tmp_path / "c.json"
        assert run(["coeffs", "--dim", "2", "--json", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["gamma2_closed"] == pytest.approx(0.5, abs=1e-15)
        assert report["gamma1_closed"] == pytest.approx(-0.25, abs=1e-13)

    def test_both_reports_difference(self, tmp_path, capsys):
        out = tmp_path / "c.json"
        assert run(["coeffs", "--dim", "1", "--method", "both", "--json", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["gamma1_difference"] <= 1e-6
        assert report["gamma2_difference"] <= 1e-6

    def test_invalid_dimension(self, capsys):
        assert run(["coeffs", "--dim", "0"]) == 2

    def test_json_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run(["coeffs", "--dim", "3", "--method", "both", "--json", str(a)])
        run(["coeffs", "--dim", "3", "--method", "both", "--json", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestSpectrumCommand:
    def test_harmonic_files(self, tmp_path, capsys):
        csv = tmp_path / "h.csv"
        js = tmp_path / "h.json"
        code = run(
            [
                "spectrum",
                "--dim",
                "1",
                "--grid",
                "1024",
                "--half-width",
                "12",
                "--count",
                "20",
                "--operator",
                "harmonic",
                "--min-trusted",
                "20",
                "--csv",
                str(csv),
                "--json",
                str(js),
            ]
        )
        assert code == 0
        _, names, rows = read_csv(csv)
        assert names == ["eigenvalue"]
        assert len(rows) == 20
        side = json.loads(js.read_text())
        assert side["trusted_count"] == 20

    def test_min_trusted_failure_exit(self, tmp_path, capsys):
        code = run(
            [
                "spectrum",
                "--dim",
                "1",
                "--grid",
                "256",
                "--half-width",
                "40",
                "--count",
                "200",
                "--operator",
                "model",
                "--lambda-target",
                "5.0",
                "--min-trusted",
                "200",
            ]
        )
        assert code == 3

    def test_confinement_diagnostic(self, capsys):
        code = run(
            ["spectrum", "--dim", "1", "--grid", "512", "--half-width", "8", "--count", "200"]
        )
        assert code == 2
        assert "confinement" in capsys.readouterr().err


class TestFitCommand:
    def test_exact_fit_report(self, tmp_path, capsys):
        lam = np.linspace(5.0, 80.0, 40)
        y = 0.5 * lam**2 * np.log(lam) + 0.25 * lam**2
        csv = tmp_path / "pts.csv"
        csv.write_text(
            "# synthetic counting samples\nlambda,count\n"
            + "\n".join(f"{float(a)!r},{float(b)!r}" for a, b in zip(lam, y))
            + "\n"
        )
        out = tmp_path / "fit.json"
        assert run(["fit", str(csv), "--exponent", "2", "--json", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["residual_sup"] <= 1e-9
        assert report["coefficients"]["w_1_0"] == pytest.approx(0.5, abs=1e-10)

    def test_missing_file_is_io_error(self, tmp_path, capsys):
        assert run(["fit", str(tmp_path / "nope.csv"), "--exponent", "1"]) == 4

    def test_window_restriction(self, tmp_path, capsys):
        lam = np.linspace(5.0, 80.0, 60)
        y = 0.3 * lam * np.log(lam) + 0.1 * lam
        csv = tmp_path / "pts.csv"
        csv.write_text(
            "lambda,count\n"
            + "\n".join(f"{float(a)!r},{float(b)!r}" for a, b in zip(lam, y))
            + "\n"
        )
        out = tmp_path / "fit.json"
        code = run(
            ["fit", str(csv), "--exponent", "1", "--window", "20", "60", "--json", str(out)]
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["window_min"] >= 20.0 and report["window_max"] <= 60.0
        assert report["coefficients"]["w_1_0"] == pytest.approx(0.3, abs=1e-9)


class TestFlowCommand:
    def test_orthogonal_period(self, tmp_path, capsys):
        out = tmp_path / "flow.json"
        traj = tmp_path / "traj.csv"
        code = run(
            [
                "flow",
                "--omega",
                "1",
                "0",
                "--theta",
                "0",
                "1",
                "--t",
                repr(2 * math.pi),
                "--csv",
                str(traj),
                "--json",
                str(out),
            ]
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["numeric_distance_to_start"] <= 1e-8
        assert report["return_time"] == pytest.approx(2 * math.pi, rel=1e-12)
        _, names, rows = read_csv(traj)
        assert names[0] == "t" and len(rows) == 200

    def test_seeded_state(self, tmp_path, capsys):
        out = tmp_path / "flow.json"
        assert run(["flow", "--dim", "3", "--seed", "5", "--json", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["numeric_distance_to_start"] <= 1e-6


class TestZetaCommand:
    @pytest.fixture()
    def spectrum_csv(self, tmp_path):
        csv = tmp_path / "h.csv"
        run(
            [
                "spectrum",
                "--dim",
                "1",
                "--grid",
                "1024",
                "--half-width",
                "12",
                "--count",
                "20",
                "--operator",
                "harmonic",
                "--csv",
                str(csv),
            ]
        )
        return csv

    def test_partial_sums(self, spectrum_csv, tmp_path, capsys):
        out = tmp_path / "z.json"
        code = run(
            ["zeta", str(spectrum_csv), "--s", "2.0", "3.0", "--exponent", "0.5", "--json", str(out)]
        )
        assert code == 0
        report = json.loads(out.read_text())
        # partial sum of (2k+1)^-2 over the 20 trusted eigenvalues
        approx = sum((2 * k + 1.0) ** -2 for k in range(20))
        assert report["zeta"]["2"] == pytest.approx(approx, rel=1e-3)

    def test_below_abscissa_domain_error(self, spectrum_csv, capsys):
        assert run(["zeta", str(spectrum_csv), "--s", "0.3", "--exponent", "0.5"]) == 2

    def test_missing_input(self, tmp_path, capsys):
        assert run(["zeta", str(tmp_path / "none.csv"), "--s", "2.0"]) == 4


class TestMeasureCommand:
    def test_full_measure(self, tmp_path, capsys):
        out = tmp_path / "m.json"
        assert run(["measure", "--dim", "2", "--seed", "9", "--samples", "300", "--json", str(out)]) == 0
        report = json.loads(out.read_text())
        assert report["periodic_fraction"] == 1.0

    def test_short_horizon(self, tmp_path, capsys):
        out = tmp_path / "m.json"
        assert run(
            ["measure", "--dim", "2", "--seed", "9", "--samples", "100", "--t-max", "1.0", "--json", str(out)]
        ) == 0
        assert json.loads(out.read_text())["periodic_fraction"] == 0.0


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "sgweyl.cli", "coeffs", "--dim", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "gamma2_closed = 0.5" in proc.stdout
