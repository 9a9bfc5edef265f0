import json
import math
import subprocess
import sys

import numpy as np
import pytest

from srlie import cli
from srlie.distance import dist_so3r_rho1
from srlie.groups import So3RPoint
from srlie.roots import SolverError
from srlie.verify import SuiteResult


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def strict_json(text):
    def reject(token):
        raise ValueError(f"non-standard JSON token {token}")

    return json.loads(text, parse_constant=reject)


class TestDist:
    def test_antipodal_circle(self, capsys):
        code, out, _ = run(capsys, "dist", "--group", "su2r", "--metric", "2",
                           "--A", "0,0", "--B", "1,0", "--v", "0")
        assert code == 0
        row = strict_json(out)
        assert row["value"] == math.pi and row["case_label"] == 1

    def test_identity(self, capsys):
        code, out, _ = run(capsys, "dist", "--A", "1,0", "--B", "0,0")
        assert code == 0 and strict_json(out)["value"] == 0

    def test_matches_library_bit_for_bit(self, capsys):
        C = np.diag([-1.0, -1.0, 1.0])
        code, out, _ = run(capsys, "dist", "--group", "so3r", "--metric", "1",
                           "--C", ",".join(str(x) for x in C.ravel()), "--v", "0.5")
        assert code == 0
        assert strict_json(out)["value"] == dist_so3r_rho1(So3RPoint(C, 0.5)).value

    def test_negative_values_accepted(self, capsys):
        code, out, _ = run(capsys, "dist", "--A", "-1,0", "--B", "0,0", "--v", "-2")
        assert code == 0
        assert strict_json(out)["value"] == pytest.approx(math.sqrt(4 + 4 * math.pi ** 2))

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "dist", "--A", "0,0", "--B", "1,0", "--format", "csv")
        assert code == 0
        header, row = out.splitlines()
        assert header.split(",")[:3] == ["group", "metric", "value"]
        assert "\r" not in out and row.split(",")[2] == "3.1415926535897931"

    @pytest.mark.parametrize("argv", [
        ["dist", "--A", "2,0", "--B", "0,0"],
        ["dist", "--A", "1,0"],
        ["dist", "--group", "so3r"],
        ["dist", "--group", "so3r", "--C", "1,0,0,0,1,0,0,0,-1"],
        ["dist", "--metric", "3", "--A", "1,0", "--B", "0,0"],
        ["dist", "--A", "x,0", "--B", "0,0"],
        ["bogus"],
    ])
    def test_input_errors(self, capsys, argv):
        code, out, _ = run(capsys, *argv)
        assert code == 2 and out == ""

    def test_solver_failure_exit(self, capsys, monkeypatch):
        def boom(*_a, **_k):
            raise SolverError("no bracket")

        monkeypatch.setattr(cli, "distance", boom)
        code, out, err = run(capsys, "dist", "--A", "0.6,0", "--B", "0.8,0")
        assert code == 3 and "no bracket" in err and out == ""


class TestGeodesic:
    def test_half_period_row(self, capsys):
        code, out, _ = run(capsys, "geodesic", "--alpha", "1,0,0", "--beta", "0",
                           "--t0", "0", "--t1", str(math.pi), "--n", "2")
        rows = strict_json(out)
        assert code == 0 and len(rows) == 3
        last = rows[-1]
        assert abs(last["ReA"]) < 1e-15 and last["ReB"] == 1 and last["v"] == 0

    def test_single_identity_row(self, capsys):
        code, out, _ = run(capsys, "geodesic", "--alpha", "1,0,0", "--t0", "0", "--t1", "0",
                           "--n", "1", "--format", "csv")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 2
        assert lines[1] == "0,1,0,0,0,0"

    def test_phi0_entry(self, capsys):
        code, out, _ = run(capsys, "geodesic", "--phi0", "0", "--alpha2", "0", "--t1", "1",
                           "--n", "1")
        code2, out2, _ = run(capsys, "geodesic", "--alpha", "1,0,0", "--t1", "1", "--n", "1")
        assert code == code2 == 0 and out == out2

    def test_alpha_normalization_window(self, capsys):
        assert run(capsys, "geodesic", "--alpha", "1.0000005,0,0", "--n", "1")[0] == 0
        assert run(capsys, "geodesic", "--alpha", "1.1,0,0", "--n", "1")[0] == 2

    def test_so3_columns(self, capsys):
        code, out, _ = run(capsys, "geodesic", "--group", "so3r", "--alpha", "0,0,1",
                           "--n", "1", "--format", "csv")
        assert out.splitlines()[0] == "t,c11,c12,c13,c21,c22,c23,c31,c32,c33,v"


class TestCutAndConjugate:
    def test_su2r(self, capsys):
        row = strict_json(run(capsys, "cut", "--alpha", "1,0,0", "--beta", "0")[1])
        assert row["cut_time"] == 2 * math.pi and row["locus_class"] == "LocalBranch"

    def test_so3r(self, capsys):
        row = strict_json(run(capsys, "cut", "--group", "so3r", "--alpha", "1,0,0")[1])
        assert row["cut_time"] == pytest.approx(math.pi, abs=1e-12)

    def test_metric_line_json(self, capsys):
        row = strict_json(run(capsys, "cut", "--alpha", "0,1,0")[1])
        assert row["cut_time"] == "inf" and row["locus_class"] == "MetricLine"

    def test_metric_line_csv(self, capsys):
        out = run(capsys, "cut", "--alpha", "0,1,0", "--format", "csv")[1]
        assert out.splitlines()[1].startswith("inf,MetricLine")

    def test_conjugate(self, capsys):
        row = strict_json(run(capsys, "conjugate", "--alpha", "1,0,0", "--n", "2")[1])
        assert row["conjugate_time"] == pytest.approx(8.986818915818, abs=1e-11)
        row = strict_json(run(capsys, "conjugate", "--alpha", "0,-1,0")[1])
        assert row["conjugate_time"] == "inf"
        assert run(capsys, "conjugate", "--alpha", "1,0,0", "--n", "0")[0] == 2


class TestLocusAndVerify:
    def test_locus(self, capsys):
        code, out, _ = run(capsys, "locus", "--group", "su2r", "--metric", "2",
                           "--A", "-1,0", "--B", "0,0", "--v", "3")
        row = strict_json(out)
        assert code == 0 and row["in_cut_locus"] is True

    def test_locus_absent(self, capsys):
        row = strict_json(run(capsys, "locus", "--group", "so3r",
                              "--C", "1,0,0,0,1,0,0,0,1", "--v", "1")[1])
        assert row["in_cut_locus"] is False and row["cut_branch"] is None

    def test_verify_splitting(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "splitting", "--count", "100", "--seed", "7")
        rows = strict_json(out)
        assert code == 0 and rows[0]["max_residual"] <= 1e-9

    def test_verify_ode(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "ode", "--count", "10", "--seed", "1")
        assert code == 0 and strict_json(out)[0]["max_residual"] <= 1e-8

    def test_verify_failure_exit(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "run_suites",
                            lambda *a, **k: [SuiteResult("ode", 1.0, 1e-8, 1)])
        code, out, _ = run(capsys, "verify", "--suite", "ode")
        assert code == 1 and strict_json(out)[0]["passed"] is False

    def test_verify_bad_suite(self, capsys):
        assert run(capsys, "verify", "--suite", "nope")[0] == 2
        assert run(capsys, "verify", "--count", "0")[0] == 2


def test_deterministic_output(capsys):
    argv = ["verify", "--suite", "covering", "--count", "15", "--seed", "3"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_seventeen_digit_roundtrip(capsys):
    rows = strict_json(run(capsys, "geodesic", "--alpha", "0.6,0,0.8", "--beta", "0.3",
                           "--t1", "2", "--n", "4")[1])
    from srlie.geodesics import GeodesicParams, geodesic, point_coordinates

    p = GeodesicParams(0.6, 0, 0.8, 0.3)
    for row in rows:
        got = [row[k] for k in ("ReA", "ImA", "ReB", "ImB", "v")]
        assert got == list(point_coordinates(geodesic(p, row["t"])))


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "srlie.cli", "cut", "--alpha", "1,0,0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "LocalBranch" in proc.stdout
