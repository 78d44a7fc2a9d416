from __future__ import annotations

import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest
from scipy import special

from fracflow.cli import main, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def table(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestGrids:
    def test_linear_inclusive(self):
        g = parse_grid("0:8:0.1")
        assert g.size == 81 and g[0] == 0.0 and g[-1] == 8.0

    def test_log(self):
        g = parse_grid("log:1:1e6:61")
        assert g.size == 61 and g[0] == 1.0 and g[-1] == 1e6
        assert np.allclose(np.diff(np.log10(g)), 0.1)

    def test_list(self):
        assert list(parse_grid("1,10,100")) == [1.0, 10.0, 100.0]

    @pytest.mark.parametrize("bad", ["log:0:1:5", "1:0:0.1", "0:1:0", "a,b", "log:1:2"])
    def test_rejected(self, capsys, bad):
        code, _, err = run(capsys, "specfun", "wright", "--alpha", "0.5", "--t", bad)
        assert code == 2 and "grid" in err


class TestSpecfun:
    def test_wright_table(self, capsys, outdir):
        code, out, _ = run(capsys, "specfun", "wright", "--alpha", "0.5", "--t", "0:8:0.1")
        assert code == 0
        head, rows = table(out)
        assert head == ["argument", "value", "error_estimate", "regime"]
        assert len(rows) == 81
        t = np.array([float(r[0]) for r in rows])
        v = np.array([float(r[1]) for r in rows])
        assert np.max(np.abs(v - np.exp(-t * t / 4) / math.sqrt(math.pi))) <= 1e-10

    def test_seventeen_digits(self, capsys, outdir):
        _, out, _ = run(capsys, "specfun", "wright", "--alpha", "0.3", "--t", "0.7")
        value = table(out)[1][0][1]
        from fracflow import wright_pdf
        assert float(value) == wright_pdf(0.3, 0.7).value

    def test_moment(self, capsys, outdir):
        _, out, _ = run(capsys, "specfun", "moment", "--alpha", "0.5", "--delta", "1")
        assert float(table(out)[1][0][1]) == pytest.approx(1.1283791671, abs=1e-10)

    def test_median(self, capsys, outdir):
        _, out, _ = run(capsys, "specfun", "median", "--alpha", "0.5")
        assert float(table(out)[1][0][1]) == pytest.approx(0.9538726, abs=1e-7)

    def test_ml_overflow_row(self, capsys, outdir):
        code, out, _ = run(capsys, "specfun", "ml", "--alpha", "0.5", "--z", "1,40")
        _, rows = table(out)
        assert code == 0
        assert float(rows[0][1]) == pytest.approx(math.e * special.erfc(-1.0), rel=1e-14)
        assert rows[1][1] == "inf" and rows[1][3] == "overflow"

    def test_json(self, capsys, outdir):
        _, out, _ = run(capsys, "specfun", "tail", "--alpha", "0.5", "--s", "0,1", "--format", "json")
        doc = json.loads(out)
        assert doc["schema_version"] == 1 and doc["columns"][1] == "value"
        assert doc["rows"][1][1] == pytest.approx(special.erfc(0.5), rel=1e-15)

    @pytest.mark.parametrize("argv", [["specfun", "wright", "--alpha", "1.5"],
                                      ["specfun", "wright", "--alpha", "1", "--t", "1"],
                                      ["specfun", "wright", "--alpha", "0.5", "--t", "-1"],
                                      ["specfun", "moment", "--alpha", "0.5", "--delta", "-2"],
                                      ["specfun", "nope", "--alpha", "0.5"],
                                      []])
    def test_usage_errors(self, capsys, outdir, argv):
        assert run(capsys, *argv)[0] == 2


class TestSubordinate:
    def test_pure_birth(self, capsys, outdir):
        code, out, _ = run(capsys, "subordinate", "--model", "pure-birth", "--alpha", "0.5", "--t", "1")
        head, rows = table(out)
        assert code == 0
        assert head == ["t", "classical", "subordinated_closed_form", "subordinated_quadrature", "abs_diff"]
        assert float(rows[0][2]) == pytest.approx(2.1283791671, abs=1e-10)
        assert float(rows[0][4]) <= 1e-6

    def test_contact_classical_exact(self, capsys, outdir):
        _, out, _ = run(capsys, "subordinate", "--model", "contact", "--alpha", "1", "--t", "0:3:0.5", "--n", "2")
        for r in table(out)[1]:
            assert r[1] == r[2] == r[3]

    def test_front_columns(self, capsys, outdir):
        _, out, _ = run(capsys, "subordinate", "--model", "front", "--alpha", "0.5", "--t", "2", "--x", "0:3:0.5")
        head, rows = table(out)
        assert head[:2] == ["t", "x"] and len(rows) == 7
        assert max(float(r[5]) for r in rows) <= 1e-8

    def test_divergence_exit(self, capsys, outdir):
        code, _, err = run(capsys, "subordinate", "--model", "stretched-exp", "--sigma", "3", "--alpha", "0.5")
        assert code == 3 and "diverg" in err

    def test_bad_model_parameter(self, capsys, outdir):
        assert run(capsys, "subordinate", "--model", "polynomial", "--p", "0", "--alpha", "0.5")[0] == 2


class TestFront:
    def test_rows(self, capsys, outdir):
        code, out, _ = run(capsys, "front", "--alpha", "0.5", "--t", "1,10,100")
        head, rows = table(out)
        assert code == 0 and len(rows) == 3
        assert head == ["t", "front_position", "front_law", "density_at_front"]
        for r in rows:
            assert float(r[1]) == pytest.approx(float(r[2]), rel=1e-9)
            assert abs(float(r[3]) - 0.5) <= 1e-6


class TestIntermittency:
    @pytest.mark.parametrize("model, verdict", [("contact", "intermittent"), ("pure-birth", "non_intermittent"),
                                                ("polynomial", "non_intermittent")])
    def test_verdicts(self, capsys, outdir, model, verdict):
        code, out, _ = run(capsys, "intermittency", "--model", model, "--alpha", "0.5")
        doc = json.loads(out)
        assert code == 0 and doc["verdict"] == verdict and doc["schema_version"] == 1
        assert len(doc["ratio_trace"]) == 61

    def test_all_partitions(self, capsys, outdir):
        _, out, _ = run(capsys, "intermittency", "--model", "stretched-exp", "--sigma", "1.5", "--alpha", "0.5",
                        "--all-partitions", "4", "--workers", "2")
        doc = json.loads(out)
        assert doc["verdict"] == "intermittent" and len(doc["reports"]) == 7

    def test_moments(self, capsys, outdir):
        _, out, _ = run(capsys, "intermittency", "--model", "contact", "--alpha", "0.8", "--moments")
        doc = json.loads(out)
        assert doc["source"] == "moments" and doc["verdict"] == "intermittent"

    def test_divergence(self, capsys, outdir):
        assert run(capsys, "intermittency", "--model", "stretched-exp", "--sigma", "3", "--alpha", "0.5")[0] == 3

    def test_short_grid(self, capsys, outdir):
        assert run(capsys, "intermittency", "--model", "contact", "--alpha", "0.5", "--t", "log:1:10:30")[0] == 2


class TestVerify:
    def test_subset(self, capsys, outdir):
        code, out, err = run(capsys, "verify", "--only", "wright-moments", "--alpha", "0.7")
        _, rows = table(out)
        assert code == 0 and len(rows) == 4
        assert all(r[0] == "wright-moments" and r[4] == "pass" for r in rows)
        assert "4/4" in err

    def test_corrupted_tolerances(self, capsys, outdir):
        assert run(capsys, "verify", "--only", "laplace", "--corrupt-tolerances")[0] == 1

    def test_unknown_check(self, capsys, outdir):
        assert run(capsys, "verify", "--only", "nope")[0] == 2

    def test_small_mc(self, capsys, outdir):
        code, out, _ = run(capsys, "verify", "--only", "mc-identity", "lp-exponent", "--mc-samples", "2000")
        assert code == 0 and len(table(out)[1]) == 5 + 7


class TestOutput:
    def test_env_outdir(self, capsys, outdir, monkeypatch):
        monkeypatch.setenv("FRACFLOW_OUTDIR", str(outdir))
        code, out, _ = run(capsys, "front", "--alpha", "0.5", "--t", "1,2")
        assert code == 0 and out == ""
        assert len(table((outdir / "front.csv").read_text())[1]) == 2

    def test_plot_written_next_to_table(self, capsys, outdir):
        dest = outdir / "w.csv"
        code, _, _ = run(capsys, "specfun", "wright", "--alpha", "0.4", "--out", str(dest), "--plot")
        assert code == 0 and dest.exists()
        png = outdir / "w.png"
        assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_plot_needs_destination(self, capsys, outdir):
        assert run(capsys, "specfun", "wright", "--alpha", "0.4", "--plot")[0] == 2

    def test_deterministic(self, capsys, outdir):
        blobs = []
        for k in range(2):
            d = outdir / f"run{k}"
            run(capsys, "intermittency", "--model", "contact", "--alpha", "0.5", "--out", str(d / "i.json"),
                "--plot")
            run(capsys, "sample", "--box", "0:1", "0:2", "--intensity", "3", "--n-samples", "20", "--seed", "5",
                "--out", str(d / "s.csv"))
            blobs.append([(d / n).read_bytes() for n in ("i.json", "i.png", "s.csv")])
        assert blobs[0] == blobs[1]

    def test_sample_stdout(self, capsys, outdir):
        code, out, _ = run(capsys, "sample", "--box", "0:1", "--intensity", "5", "--n-samples", "3")
        head, rows = table(out)
        assert code == 0 and head == ["sample", "index", "x0"]
        assert all(0.0 <= float(r[2]) <= 1.0 for r in rows)

    def test_sample_bad_box(self, capsys, outdir):
        assert run(capsys, "sample", "--box", "0-1")[0] == 2


def test_module_entry_point(outdir):
    p = subprocess.run([sys.executable, "-m", "fracflow", "specfun", "moment", "--alpha", "0.5", "--delta", "2"],
                       capture_output=True, text=True, check=True)
    assert float(p.stdout.splitlines()[1].split(",")[1]) == pytest.approx(2.0, rel=1e-15)


def test_plot_without_destination_fails_before_output(outdir, capsys):
    code = main(["intermittency", "--model", "contact", "--alpha", "0.5",
                 "--partition", "1+1", "--plot"])
    out, err = capsys.readouterr()
    assert code == 2
    assert out == ""
    assert "--plot needs --out" in err
