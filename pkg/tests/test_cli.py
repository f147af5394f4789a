import csv
import io
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from nsc import cli
from nsc.distributions import CoupledDensityParams, density
from nsc.exceptions import QuadratureError


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def parse_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


@pytest.fixture
def probs(tmp_path):
    def make(values, name="p.txt"):
        path = tmp_path / name
        path.write_text("# header comment\n" + "\n".join(str(v) for v in values) + "\n", encoding="utf-8")
        return str(path)

    return make


class TestFormatting:
    def test_seventeen_digits(self):
        assert cli.format_value(0.1) == "0.10000000000000001"
        assert cli.format_value(2) == "2"
        assert cli.format_value(True) == "true"

    def test_csv_header_and_lf(self):
        text = cli.format_csv(["a", "b"], [{"a": 1.0, "b": "x"}])
        assert text == "a,b\n1,x\n"

    def test_manifest_roundtrip(self, tmp_path):
        m = cli.make_manifest("sample", {"n": 3}, "out.csv", seed=5)
        path = tmp_path / "f.csv"
        path.write_text(cli.manifest_line(m) + "x\n", encoding="utf-8")
        assert cli.read_manifest(str(path)) == m

    def test_probability_file_parsing(self, tmp_path):
        path = tmp_path / "p.txt"
        path.write_text("# c\n0.25  # inline\n\n0.75\n", encoding="utf-8")
        assert cli.read_probabilities(str(path)) == [0.25, 0.75]


class TestEntropyCommand:
    def test_shannon(self, probs, capsys):
        code, out, _ = run(["entropy", "--input", probs([0.5, 0.5]), "--kind", "shannon"], capsys)
        assert code == 0
        assert out.startswith(cli.MANIFEST_PREFIX)
        row = parse_csv(out)[0]
        assert float(row["entropy"]) == pytest.approx(math.log(2), abs=1e-6)

    def test_coupled_example(self, probs, capsys):
        argv = ["entropy", "--input", probs([0.5, 0.3, 0.2]), "--kind", "coupled", "--alpha", "1", "--kappa", "1"]
        code, out, _ = run(argv, capsys)
        row = parse_csv(out)[0]
        assert code == 0
        assert set(row) == {"kind", "alpha", "kappa", "moment", "average_uncertainty", "entropy"}
        assert float(row["average_uncertainty"]) == pytest.approx(0.368829, abs=1e-6)
        p = np.array([0.5, 0.3, 0.2])
        assert float(row["entropy"]) == pytest.approx(1 / np.sum(p**1.5) - 1, rel=1e-15)
        assert float(row["moment"]) == 0.5

    def test_all_kinds(self, probs, capsys):
        code, out, _ = run(["entropy", "--input", probs([0.2, 0.8]), "--kind", "all", "--kappa", "0.5"], capsys)
        assert [r["kind"] for r in parse_csv(out)] == [
            "shannon", "renyi", "tsallis", "normalized_tsallis", "coupled"
        ]

    def test_normalization_exit(self, probs, capsys):
        code, _, err = run(["entropy", "--input", probs([0.5, 0.6])], capsys)
        assert code == 3
        assert "normalization" in err

    def test_renormalize(self, probs, capsys):
        code, out, _ = run(["entropy", "--input", probs([1, 1]), "--kind", "shannon", "--renormalize"], capsys)
        assert code == 0
        assert float(parse_csv(out)[0]["entropy"]) == pytest.approx(math.log(2))

    @pytest.mark.parametrize("content", ["0.5\nabc\n", "# only comments\n", "-0.5\n1.5\n"])
    def test_malformed_exit(self, tmp_path, capsys, content):
        path = tmp_path / "bad.txt"
        path.write_text(content, encoding="utf-8")
        code, _, _ = run(["entropy", "--input", str(path)], capsys)
        assert code == 2

    def test_missing_file(self, tmp_path, capsys):
        code, _, _ = run(["entropy", "--input", str(tmp_path / "absent.txt")], capsys)
        assert code == 2

    def test_bad_kind(self, probs, capsys):
        code, _, _ = run(["entropy", "--input", probs([1.0]), "--kind", "boltzmann"], capsys)
        assert code == 2


class TestSampleCommand:
    def test_byte_identical(self, tmp_path, capsys, monkeypatch):
        monkeypatch.chdir(tmp_path)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            # output path is part of the manifest, so write both under the same name
            code, _, _ = run(["sample", "--kappa", "1", "--n", "100", "--seed", "9", "--output", "x.csv"], capsys)
            assert code == 0
            os.replace("x.csv", path)
        assert a.read_bytes() == b.read_bytes()

    def test_file_shape(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        code, _, _ = run(["sample", "--alpha", "2", "--kappa", "0.5", "--n", "50", "--seed", "1", "--output", str(out)], capsys)
        assert code == 0
        lines = out.read_text(encoding="utf-8").split("\n")
        assert lines[0].startswith(cli.MANIFEST_PREFIX)
        assert lines[1] == "x"
        assert len([ln for ln in lines[2:] if ln]) == 50
        assert b"\r" not in out.read_bytes()

    def test_unsupported_exit(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        code, _, _ = run(["sample", "--alpha", "2", "--kappa", "-0.2", "--output", str(out)], capsys)
        assert code == 2
        assert not out.exists()

    @pytest.mark.slow
    def test_median(self, tmp_path, capsys):
        out = tmp_path / "s.csv"
        run(["sample", "--kappa", "1", "--n", "1000000", "--seed", "2024", "--output", str(out)], capsys)
        xs = np.loadtxt(out, comments="#", skiprows=2)
        assert np.median(xs) == pytest.approx(1.0, abs=0.01)


class TestSweepCommand:
    def test_figure1_row(self, tmp_path, capsys):
        out = tmp_path / "f1.csv"
        code, _, _ = run(["sweep", "--figure", "1", "--output", str(out)], capsys)
        assert code == 0
        rows = parse_csv(out.read_text(encoding="utf-8"))
        hit = [r for r in rows if r["alpha"] == "1" and float(r["kappa"]) == 1.0 and float(r["x"]) == 1.0]
        assert float(hit[0]["density"]) == 0.25
        kappas = {float(r["kappa"]) for r in rows if r["alpha"] == "1"}
        assert min(kappas) == pytest.approx(-2 / 3) and max(kappas) == 2.0
        assert all(float(r["kappa"]) >= 0 for r in rows if r["alpha"] == "2")

    def test_figure2_row(self, tmp_path, capsys):
        out = tmp_path / "f2.csv"
        code, _, _ = run(["sweep", "--figure", "2", "--kappa", "0.3,0.4,0.5", "--output", str(out)], capsys)
        assert code == 0
        rows = parse_csv(out.read_text(encoding="utf-8"))
        row = [r for r in rows if float(r["metric_kappa"]) == 0.4 and float(r["dist_kappa"]) == 0.4][0]
        target = density(CoupledDensityParams(kappa=0.4, alpha=2), 1.0)
        assert float(row["average_uncertainty"]) == pytest.approx(target, rel=1e-6)
        assert {float(r["metric_kappa"]) for r in rows} == {0.2, 0.4, 0.6, 0.8}

    def test_figure3_row(self, tmp_path, capsys):
        out = tmp_path / "f3.csv"
        argv = ["sweep", "--figure", "3", "--sigma", "1", "--kappa", "0.7", "--kind", "coupled", "--output", str(out)]
        code, _, _ = run(argv, capsys)
        assert code == 0
        row = parse_csv(out.read_text(encoding="utf-8"))[0]
        assert float(row["entropy"]) == pytest.approx(1.0, abs=1e-10)

    def test_replay_byte_identical(self, tmp_path, capsys):
        out = tmp_path / "f4.csv"
        argv = ["sweep", "--figure", "4", "--sigma", "0.5,1", "--kappa", "0,0.5,1", "--output", str(out)]
        assert run(argv, capsys)[0] == 0
        again = tmp_path / "again.csv"
        assert run(["replay", str(out), "--output", str(again)], capsys)[0] == 0
        assert out.read_bytes() == again.read_bytes()

    def test_single_sigma_required(self, tmp_path, capsys):
        code, _, _ = run(["sweep", "--figure", "2", "--sigma", "1,2", "--output", str(tmp_path / "x.csv")], capsys)
        assert code == 2

    def test_bad_figure(self, capsys):
        with pytest.raises(SystemExit) as info:
            cli.main(["sweep", "--figure", "7"])
        assert info.value.code == 2

    def test_numerical_failure_removes_partial(self, tmp_path, capsys, monkeypatch):
        out = tmp_path / "f3.csv"

        def boom(*args, **kwargs):
            raise QuadratureError("tolerance not met")

        monkeypatch.setattr(cli, "figure_rows", boom)
        code, _, err = run(["sweep", "--figure", "3", "--output", str(out)], capsys)
        assert code == 4
        assert "numerical" in err
        assert not out.exists()
        assert os.listdir(tmp_path) == []

    def test_write_failure_cleans_temp(self, tmp_path, monkeypatch):
        out = tmp_path / "x.csv"
        monkeypatch.setattr(os, "replace", lambda *a: (_ for _ in ()).throw(OSError("disk")))
        with pytest.raises(OSError):
            cli.write_output("data\n", str(out))
        assert os.listdir(tmp_path) == []


class TestVerifyCommand:
    @pytest.mark.parametrize("suite", ["lemma2", "theorem1", "closedforms"])
    def test_suites_pass(self, suite, capsys):
        code, out, _ = run(["verify", "--suite", suite], capsys)
        assert code == 0
        assert "FAIL" not in out
        assert out.startswith(cli.MANIFEST_PREFIX)

    def test_failure_exit_code(self, capsys, monkeypatch):
        from nsc import verify

        def failing():
            return [verify.CheckResult("forced", 1.0, 0.0)]

        monkeypatch.setitem(verify.SUITES, "algebra", failing)
        code, out, _ = run(["verify", "--suite", "algebra"], capsys)
        assert code == 1
        assert "FAIL" in out

    def test_unknown_suite(self):
        with pytest.raises(SystemExit) as info:
            cli.main(["verify", "--suite", "nope"])
        assert info.value.code == 2


def test_console_script_entry_point(tmp_path):
    path = tmp_path / "p.txt"
    path.write_text("0.5\n0.5\n", encoding="utf-8")
    proc = subprocess.run(
        [sys.executable, "-m", "nsc.cli", "entropy", "--input", str(path), "--kind", "shannon"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    manifest = json.loads(proc.stdout.splitlines()[0][len(cli.MANIFEST_PREFIX):])
    assert manifest["command"] == "entropy"
