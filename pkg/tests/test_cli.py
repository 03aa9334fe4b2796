"""Exit codes, parsing, and JSON schemas of the command-line surface."""

import json
import math

import numpy as np
import pytest

from normgen import Certificate, counterexample_pair, haar_unitary
from normgen.cli import main


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def diag_file(tmp_path):
    return write_json(
        tmp_path / "diag.json",
        {"n": 2, "re": [[1, 0], [0, -1]], "im": [[0, 0], [0, 0]]},
    )


@pytest.fixture
def rational_files(tmp_path):
    u = write_json(
        tmp_path / "ru.json",
        {"atoms": [
            {"angle": 0.0, "num": 1, "den": 4},
            {"angle": math.pi, "num": 3, "den": 4},
        ]},
    )
    v = write_json(
        tmp_path / "rv.json",
        {"atoms": [
            {"angle": math.pi / 2, "num": 1, "den": 3},
            {"angle": -math.pi / 2, "num": 2, "den": 3},
        ]},
    )
    return u, v


class TestLengths:
    def test_identity_all_zero(self, tmp_path, capsys):
        path = write_json(tmp_path / "id.json", {"angles": [0.0, 0.0, 0.0]})
        assert main(["lengths", path]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["kind"] == "ell"
        assert out["values"] == [0.0, 0.0, 0.0]

    def test_two_point_profile(self, diag_file, capsys):
        assert main(["lengths", diag_file, "--one-norm", "--rank"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["values"][0] == pytest.approx(math.sqrt(2.0), abs=1e-12)
        assert out["values"][1] == pytest.approx(0.0, abs=1e-12)
        assert out["one_norm"] == pytest.approx(1.0, abs=1e-8)
        assert out["rank"] == 1

    def test_mu_kind(self, diag_file, capsys):
        assert main(["lengths", diag_file, "--kind", "mu", "--one-norm"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["kind"] == "mu"
        assert out["values"] == [2.0, 0.0]
        assert out["one_norm"] == pytest.approx(1.0, abs=1e-12)

    def test_missing_file(self, tmp_path):
        assert main(["lengths", str(tmp_path / "nope.json")]) == 2

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["lengths", str(path)]) == 2

    def test_unrecognized_payload(self, tmp_path):
        path = write_json(tmp_path / "odd.json", {"something": 1})
        assert main(["lengths", str(path)]) == 2

    def test_non_unitary(self, tmp_path, capsys):
        path = write_json(
            tmp_path / "nu.json",
            {"n": 2, "re": [[2, 0], [0, 1]], "im": [[0, 0], [0, 0]]},
        )
        assert main(["lengths", str(path)]) == 3

    def test_rational_operand_rejected(self, rational_files):
        u, _ = rational_files
        assert main(["lengths", u]) == 3


class TestGenerate:
    def test_self_generation(self, diag_file, tmp_path, capsys):
        out = tmp_path / "cert.json"
        code = main(
            ["generate", diag_file, diag_file, "--mode", "rank-dep",
             "--m", "1", "--out", str(out)]
        )
        assert code == 0
        line = capsys.readouterr().out.strip()
        assert line.startswith("k=") and "budget=16" in line and "residual=" in line
        cert = Certificate.from_json(json.loads(out.read_text()))
        assert cert.theorem == "rank_dep"
        assert len(cert.steps) <= 16

    def test_counterexample_hypothesis_exit(self, tmp_path, capsys):
        pair = counterexample_pair(6)
        u = write_json(tmp_path / "u.json", pair["u"].to_json())
        v = write_json(tmp_path / "v.json", pair["v"].to_json())
        code = main(
            ["generate", u, v, "--mode", "rank-indep", "--s", "2", "--m", "1"]
        )
        assert code == 4
        err = json.loads(capsys.readouterr().err)
        assert err["satisfied"] is False
        assert err["s"] == 2

    def test_broise_mode(self, tmp_path, capsys):
        w = haar_unitary(3, np.random.default_rng(9))
        path = write_json(tmp_path / "w.json", w.to_json())
        out = tmp_path / "bcert.json"
        assert main(["generate", path, "--mode", "broise", "--out", str(out)]) == 0
        cert = Certificate.from_json(json.loads(out.read_text()))
        assert len(cert.steps) <= 4
        assert cert.theorem == "broise_kernel"

    def test_pipeline_mode(self, rational_files, tmp_path, capsys):
        u, v = rational_files
        out = tmp_path / "pcert.json"
        code = main(
            ["generate", u, v, "--mode", "pipeline", "--m", "2",
             "--s", "1/3", "--out", str(out)]
        )
        assert code == 0
        blob = json.loads(out.read_text())
        assert blob["s0"] == 12
        assert blob["claimed_budget"] == 288

    def test_missing_base(self, diag_file):
        assert main(["generate", diag_file, "--mode", "rank-dep"]) == 2

    def test_rank_indep_needs_s(self, diag_file):
        assert main(["generate", diag_file, diag_file, "--mode", "rank-indep"]) == 2

    def test_rational_into_matrix_mode(self, rational_files):
        u, v = rational_files
        assert main(["generate", u, v, "--mode", "rank-dep"]) == 3

    def test_unknown_mode(self, diag_file):
        assert main(["generate", diag_file, "--mode", "bogus"]) == 2


class TestVerify:
    def emitted(self, tmp_path, diag_file):
        out = tmp_path / "cert.json"
        assert main(["generate", diag_file, diag_file, "--out", str(out)]) == 0
        return out

    def test_emitted_cert_passes(self, tmp_path, diag_file, capsys):
        out = self.emitted(tmp_path, diag_file)
        capsys.readouterr()
        assert main(["verify", str(out)]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["pass"] is True
        assert report["version"] == "normgen-report/1"

    def test_tampered_cert_fails(self, tmp_path, diag_file, capsys):
        out = self.emitted(tmp_path, diag_file)
        blob = json.loads(out.read_text())
        blob["steps"][0]["g"]["re"][0][0] += 1e-2
        out.write_text(json.dumps(blob))
        capsys.readouterr()
        assert main(["verify", str(out)]) == 1

    def test_tolerance_override(self, tmp_path, diag_file, capsys):
        out = self.emitted(tmp_path, diag_file)
        capsys.readouterr()
        assert main(["verify", str(out), "--tol", "1e-30"]) == 1
        report = json.loads(capsys.readouterr().out)
        assert report["checks"]["product"] is False
        assert report["tolerance"] == 1e-30

    def test_malformed_cert(self, tmp_path):
        path = write_json(tmp_path / "c.json", {"version": "other/9"})
        assert main(["verify", str(path)]) == 2


class TestCorpus:
    def test_small_run_passes(self, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        code = main(
            ["corpus", "--cases", "5", "--seed", "1",
             "--report", str(report_path)]
        )
        assert code == 0
        stdout = capsys.readouterr().out
        assert json.loads(stdout) == json.loads(report_path.read_text())

    def test_byte_identical_reruns(self, capsys):
        assert main(["corpus", "--cases", "5", "--seed", "2"]) == 0
        first = capsys.readouterr().out
        assert main(["corpus", "--cases", "5", "--seed", "2"]) == 0
        second = capsys.readouterr().out
        assert first == second

    def test_empty_run(self, capsys):
        assert main(["corpus", "--cases", "0"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["all_pass"] is True
        assert report["results"] == []

    def test_sizes_flag(self, capsys):
        assert main(["corpus", "--cases", "2", "--sizes", "3,4"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["sizes"] == [3, 4]

    def test_bad_sizes_token(self, capsys):
        assert main(["corpus", "--cases", "1", "--sizes", "3,x"]) == 2


class TestCounterexample:
    def test_bound_and_feasibility(self, capsys):
        assert main(["counterexample", "--n", "6"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["lower_bound"] == 5
        assert out["max_feasible_s"] == 1
        assert out["hypothesis"]["satisfied"] is True
        assert out["aligned_rank_distance"] == {"num": 5, "den": 6}

    def test_smallest_case(self, capsys):
        assert main(["counterexample", "--n", "2"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["lower_bound"] == 1

    def test_usage_error(self):
        assert main(["counterexample", "--n", "1"]) == 2

    def test_no_command(self):
        assert main([]) == 2

    def test_version_flag(self, capsys):
        assert main(["--version"]) == 0
