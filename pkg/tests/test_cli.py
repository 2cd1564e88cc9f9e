"""Command-line contract: documents, exit codes, determinism, round trips."""

import json

import pytest

from tribekit.cli import main
from tribekit.reportio import reconstruct_report


def write_input(tmp_path, name="in.json", **payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def example_a_input(tmp_path):
    return write_input(tmp_path, bounds=["1", "1", "1", "1"], mu="0.25")


class TestAnalyze:
    def test_all_ones(self, tmp_path, capsys):
        rc = main(["analyze", "--input", example_a_input(tmp_path)])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["talagrand_sum"] == 4.0
        assert abs(doc["alpha"] - 2.613706) < 1e-5
        assert abs(doc["mu_max"] - 0.278709) < 1e-5
        assert doc["feasible"] is True
        assert set(doc) == {"talagrand_sum", "alpha", "mu_max", "feasible"}

    def test_infeasible_bounds(self, tmp_path, capsys):
        rc = main(["analyze", "--input", write_input(tmp_path, bounds=["0.5"])])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["feasible"] is False
        assert doc["mu_max"] == 0.0

    def test_zero_bound_is_input_error(self, tmp_path, capsys):
        rc = main(["analyze", "--input", write_input(tmp_path, bounds=["0"])])
        assert rc == 3
        assert capsys.readouterr().err

    def test_float_bounds_rejected(self, tmp_path):
        path = tmp_path / "in.json"
        path.write_text('{"bounds": [0.5]}', encoding="utf-8")
        assert main(["analyze", "--input", str(path)]) == 3

    def test_missing_file(self, tmp_path):
        assert main(["analyze", "--input", str(tmp_path / "nope.json")]) == 3

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "in.json"
        path.write_text("{not json", encoding="utf-8")
        assert main(["analyze", "--input", str(path)]) == 3


class TestConstruct:
    def test_example_a_guaranteed(self, tmp_path):
        out = tmp_path / "report.json"
        rc = main([
            "construct", "--input", example_a_input(tmp_path),
            "--verify", "exact", "--output", str(out),
        ])
        assert rc == 0
        doc = json.loads(out.read_text())
        assert doc["tribe_sizes"] == [2, 2]
        assert doc["m_star"] == 1
        assert doc["expectation"] == {"mantissa": "1", "exponent": 2, "approx": 0.25}
        assert [e["approx"] for e in doc["influences"]] == [0.5, 0.5, 0.0, 0.0]
        assert all(v["pass"] for v in doc["checks"].values())
        assert doc["verification"]["mode"] == "exhaustive"
        assert doc["verification"]["passed"] is True

    def test_unguaranteed_exit_one(self, tmp_path, capsys):
        path = write_input(
            tmp_path, bounds=["1", "0.4", "0.3", "0.2", "0.1"], mu="0.1"
        )
        rc = main(["construct", "--input", path])
        assert rc == 1
        doc = json.loads(capsys.readouterr().out)
        assert doc["guaranteed"] is False
        assert all(v["pass"] for v in doc["checks"].values())

    def test_infeasible_exit_two(self, tmp_path):
        path = write_input(tmp_path, bounds=["0.3"], mu="0.1")
        assert main(["construct", "--input", path]) == 2

    def test_unachievable_mu_exit_two(self, tmp_path):
        path = write_input(tmp_path, bounds=["1", "1"], mu="0.5")
        assert main(["construct", "--input", path]) == 2

    def test_missing_mu_exit_three(self, tmp_path):
        path = write_input(tmp_path, bounds=["1", "1"])
        assert main(["construct", "--input", path]) == 3

    def test_mu_flag_wins_over_document(self, tmp_path, capsys):
        path = write_input(tmp_path, bounds=["1", "1", "1", "1"], mu="0.9")
        rc = main(["construct", "--input", path, "--mu", "0.25"])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["mu"] == "0.25"

    def test_bad_mu_exit_three(self, tmp_path):
        path = write_input(tmp_path, bounds=["1", "1"], mu="1.5")
        assert main(["construct", "--input", path]) == 3

    def test_exact_verify_beyond_cap_is_input_error(self, tmp_path):
        path = example_a_input(tmp_path)
        rc = main(["construct", "--input", path, "--verify", "exact", "--cap", "1"])
        assert rc == 3

    def test_default_mode_flips_to_sample_beyond_cap(self, tmp_path, capsys):
        path = example_a_input(tmp_path)
        rc = main([
            "construct", "--input", path, "--cap", "1", "--samples", "2000",
        ])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["verification"]["mode"] == "sampled"
        assert doc["verification"]["samples"] == 2000

    def test_verify_none_omits_verification(self, tmp_path, capsys):
        rc = main([
            "construct", "--input", example_a_input(tmp_path), "--verify", "none",
        ])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert "verification" not in doc

    def test_diagnostics_present(self, tmp_path, capsys):
        rc = main(["construct", "--input", example_a_input(tmp_path)])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["diagnostics"]["talagrand_ratio"] > 0
        assert doc["diagnostics"]["kkl_ratio"] > 0

    def test_usage_error_exit_three(self, capsys):
        assert main(["construct"]) == 3
        assert main(["frobnicate"]) == 3
        capsys.readouterr()


class TestVerifyCommand:
    def make_report(self, tmp_path, **payload):
        inp = write_input(tmp_path, **payload)
        out = tmp_path / "report.json"
        rc = main(["construct", "--input", inp, "--output", str(out),
                   "--verify", "none"])
        assert rc in (0, 1)
        return out

    def test_round_trip_certifies(self, tmp_path, capsys):
        report = self.make_report(
            tmp_path, bounds=["1", "0.7", "0.6", "0.25"], mu="0.3"
        )
        rc = main(["verify", "--input", str(report)])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["verification"]["mode"] == "exhaustive"
        assert doc["verification"]["passed"] is True

    def test_round_trip_reconstructs_identical_function(self, tmp_path):
        from tribekit.analysis import BoundSequence
        from tribekit.construction import construct

        report = self.make_report(
            tmp_path, bounds=["0.9", "1", "0.3", "0.8"], mu="0.21"
        )
        rebuilt = reconstruct_report(json.loads(report.read_text()))
        direct = construct(
            BoundSequence.from_decimals(["0.9", "1", "0.3", "0.8"]), "0.21"
        )
        assert rebuilt.tribes == direct.tribes
        assert rebuilt.expectation == direct.expectation
        assert rebuilt.influences == direct.influences
        assert rebuilt.partition == direct.partition

    def test_tampered_expectation_exit_four(self, tmp_path, capsys):
        report = self.make_report(tmp_path, bounds=["1", "1", "1", "1"], mu="0.25")
        doc = json.loads(report.read_text())
        doc["expectation"]["mantissa"] = "3"
        report.write_text(json.dumps(doc), encoding="utf-8")
        rc = main(["verify", "--input", str(report)])
        assert rc == 4
        assert "expectation" in capsys.readouterr().err

    def test_tampered_influence_exit_four(self, tmp_path):
        report = self.make_report(tmp_path, bounds=["1", "1", "1", "1"], mu="0.25")
        doc = json.loads(report.read_text())
        doc["influences"][2]["mantissa"] = "1"
        doc["influences"][2]["exponent"] = 4
        report.write_text(json.dumps(doc), encoding="utf-8")
        assert main(["verify", "--input", str(report)]) == 4

    def test_tampered_structure_exit_four(self, tmp_path):
        report = self.make_report(tmp_path, bounds=["1", "1", "1", "1"], mu="0.25")
        doc = json.loads(report.read_text())
        doc["m_star"] = 2
        report.write_text(json.dumps(doc), encoding="utf-8")
        assert main(["verify", "--input", str(report)]) == 4

    def test_missing_tribe_sizes_exit_three(self, tmp_path):
        report = self.make_report(tmp_path, bounds=["1", "1", "1", "1"], mu="0.25")
        doc = json.loads(report.read_text())
        del doc["tribe_sizes"]
        report.write_text(json.dumps(doc), encoding="utf-8")
        assert main(["verify", "--input", str(report)]) == 3

    def test_sampled_mode_beyond_cap(self, tmp_path, capsys):
        report = self.make_report(tmp_path, bounds=["1", "1", "1", "1"], mu="0.25")
        rc = main([
            "verify", "--input", str(report), "--cap", "1", "--samples", "2000",
        ])
        assert rc == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["verification"]["mode"] == "sampled"


class TestDeterminism:
    def test_construct_byte_identical(self, tmp_path):
        inp = example_a_input(tmp_path)
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        for out in (out1, out2):
            assert main(["construct", "--input", inp, "--output", str(out)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_verify_byte_identical_with_fixed_seed(self, tmp_path):
        inp = example_a_input(tmp_path)
        report = tmp_path / "report.json"
        assert main(["construct", "--input", inp, "--output", str(report)]) == 0
        outs = [tmp_path / "v1.json", tmp_path / "v2.json"]
        for out in outs:
            rc = main([
                "verify", "--input", str(report), "--cap", "1",
                "--samples", "5000", "--seed", "42", "--output", str(out),
            ])
            assert rc == 0
        assert outs[0].read_bytes() == outs[1].read_bytes()
