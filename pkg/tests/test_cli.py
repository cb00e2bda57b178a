"""Command-line interface contract tests: formats, exit codes, determinism."""

import json
import math
import os

import pytest

from qfi_radar.cli import main

ROOT3_2 = math.sqrt(3.0) / 2.0


def read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def csv_rows(path):
    lines = read(path).splitlines()
    header = lines[0].split(",")
    return header, [dict(zip(header, line.split(","))) for line in lines[1:]]


class TestQfi:
    def test_header_and_reference_row(self, tmp_path):
        code = main([
            "qfi", "--strategy", "entangled_biphoton", "--pair", "time_sum_freq_diff",
            "--kappa-min", "0", "--kappa-max", "0", "--kappa-step", "1",
            "--out", str(tmp_path),
        ])
        assert code == 0
        header, rows = csv_rows(tmp_path / "qfi.csv")
        assert header == ["strategy", "pair", "kappa", "sigma", "H11", "H22", "bound", "residual"]
        assert len(rows) == 1
        row = rows[0]
        assert float(row["H11"]) == 2.0
        assert float(row["H22"]) == 0.5
        assert float(row["bound"]) == 1.0
        assert float(row["residual"]) <= 1e-8

    def test_json_format(self, tmp_path):
        code = main([
            "qfi", "--strategy", "two_single_photons", "--pair", "time_sum_freq_diff",
            "--kappa-min", "0", "--kappa-max", "0", "--kappa-step", "1",
            "--format", "json", "--out", str(tmp_path),
        ])
        assert code == 0
        lines = read(tmp_path / "qfi.jsonl").splitlines()
        rec = json.loads(lines[0])
        assert rec["bound"] == 1.0

    def test_empty_grid_usage_error(self, tmp_path):
        code = main([
            "qfi", "--kappa-min", "0.5", "--kappa-max", "-0.5", "--kappa-step", "0.1",
            "--out", str(tmp_path),
        ])
        assert code == 2

    def test_bad_step_usage_error(self, tmp_path):
        code = main([
            "qfi", "--kappa-min", "0", "--kappa-max", "0.5", "--kappa-step", "-0.1",
            "--out", str(tmp_path),
        ])
        assert code == 2

    def test_svg_rejected_for_tables(self, tmp_path):
        code = main(["qfi", "--format", "svg", "--out", str(tmp_path)])
        assert code == 2


class TestCurves:
    def test_reference_values(self, tmp_path):
        code = main([
            "curves", "--pair", "time_sum_freq_diff",
            "--kappa-min", "-0.6", "--kappa-max", "0.6", "--kappa-step", "0.6",
            "--out", str(tmp_path),
        ])
        assert code == 0
        header, rows = csv_rows(tmp_path / "curves_time_sum_freq_diff.csv")
        assert header == [
            "kappa", "entangled_biphoton", "two_single_photons", "quantum_illumination",
        ]
        by_kappa = {float(r["kappa"]): r for r in rows}
        assert float(by_kappa[0.0]["entangled_biphoton"]) == 1.0
        assert float(by_kappa[0.0]["two_single_photons"]) == 1.0
        assert float(by_kappa[0.0]["quantum_illumination"]) == 2.0
        assert float(by_kappa[-0.6]["entangled_biphoton"]) == pytest.approx(0.5, abs=1e-15)

    def test_qi_crossover_row(self, tmp_path):
        code = main([
            "curves", "--pair", "time_sum_freq_diff",
            "--kappa-min", str(ROOT3_2), "--kappa-max", str(ROOT3_2), "--kappa-step", "1",
            "--out", str(tmp_path),
        ])
        assert code == 0
        _, rows = csv_rows(tmp_path / "curves_time_sum_freq_diff.csv")
        assert float(rows[0]["quantum_illumination"]) == pytest.approx(1.0, abs=1e-12)

    def test_svg_output(self, tmp_path):
        code = main([
            "curves", "--kappa-min", "-0.9", "--kappa-max", "0.9", "--kappa-step", "0.1",
            "--format", "svg", "--out", str(tmp_path),
        ])
        assert code == 0
        svg = read(tmp_path / "curves_time_sum_freq_diff.svg")
        assert svg.startswith("<svg")
        assert svg.count("<polyline") == 3
        assert "entangled_biphoton" in svg  # legend labels present

    def test_deterministic_output(self, tmp_path):
        args = [
            "curves", "--kappa-min", "-0.5", "--kappa-max", "0.5", "--kappa-step", "0.25",
        ]
        d1, d2 = tmp_path / "a", tmp_path / "b"
        assert main(args + ["--out", str(d1)]) == 0
        assert main(args + ["--out", str(d2)]) == 0
        assert read(d1 / "curves_time_sum_freq_diff.csv") == read(
            d2 / "curves_time_sum_freq_diff.csv"
        )

    def test_unwritable_out_io_error(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        code = main([
            "curves", "--kappa-min", "0", "--kappa-max", "0", "--kappa-step", "1",
            "--out", str(blocker / "sub"),
        ])
        assert code == 3


class TestOracleCheck:
    def test_verdict_schema_and_summary(self, tmp_path, capsys):
        code = main([
            "oracle-check", "--kappa-min", "0.6", "--kappa-max", "0.6", "--kappa-step", "1",
            "--out", str(tmp_path),
        ])
        assert code == 0
        lines = read(tmp_path / "verdicts.jsonl").splitlines()
        assert lines
        for line in lines:
            rec = json.loads(line)
            assert set(rec) == {
                "strategy", "pair", "params", "paper_value", "oracle_value",
                "rel_diff", "verdict",
            }
        out = capsys.readouterr().out
        assert "confirmed" in out and "refuted" in out

    def test_entangled_rows_confirmed(self, tmp_path):
        code = main([
            "oracle-check", "--strategy", "entangled_biphoton",
            "--kappa-min", "-0.5", "--kappa-max", "0.5", "--kappa-step", "0.5",
            "--out", str(tmp_path),
        ])
        assert code == 0
        records = [json.loads(l) for l in read(tmp_path / "verdicts.jsonl").splitlines()]
        assert records
        for rec in records:
            assert rec["verdict"] == "confirmed"
            assert rec["rel_diff"] <= 1e-8
            assert rec["params"]["pure_path_diff"] <= 1e-9


class TestSimulate:
    def test_saturation_pass(self, tmp_path):
        code = main([
            "simulate", "--strategy", "entangled_biphoton", "--pair", "time_sum_freq_diff",
            "--kappa-min", "-0.8", "--kappa-max", "-0.8", "--kappa-step", "1",
            "--n", "20000", "--seed", "0", "--out", str(tmp_path),
        ])
        assert code == 0
        header, rows = csv_rows(tmp_path / "simulate.csv")
        assert len(rows) == 2  # time and frequency domains
        for row in rows:
            assert 0.9 <= float(row["ratio"]) <= 1.1
            assert row["ok"] == "true"

    def test_small_n_still_exits_zero(self, tmp_path):
        code = main([
            "simulate", "--strategy", "entangled_biphoton", "--pair", "time_sum_freq_diff",
            "--kappa-min", "0", "--kappa-max", "0", "--kappa-step", "1",
            "--n", "10", "--seed", "1", "--out", str(tmp_path),
        ])
        assert code == 0

    def test_fixed_seed_reproduces_csv(self, tmp_path):
        args = [
            "simulate", "--strategy", "entangled_biphoton", "--pair", "time_sum_freq_diff",
            "--kappa-min", "0", "--kappa-max", "0", "--kappa-step", "1",
            "--n", "5000", "--seed", "3",
        ]
        d1, d2 = tmp_path / "a", tmp_path / "b"
        assert main(args + ["--out", str(d1)]) == 0
        assert main(args + ["--out", str(d2)]) == 0
        assert read(d1 / "simulate.csv") == read(d2 / "simulate.csv")

    def test_qi_rejected(self, tmp_path):
        code = main([
            "simulate", "--strategy", "quantum_illumination", "--out", str(tmp_path),
        ])
        assert code == 2


class TestScenario:
    def test_multibody(self, tmp_path):
        code = main([
            "scenario", "--scenario", "multibody", "--r1", "300", "--r2", "500",
            "--v1", "0", "--v2", "0", "--kappa", "-0.9",
            "--n", "10000", "--seed", "42", "--out", str(tmp_path),
        ])
        assert code == 0
        report = json.loads(read(tmp_path / "scenario.json"))
        est = report["estimates"]["midpoint"]
        pred = report["predicted_qcrb_std_errors"]["midpoint"]
        assert abs(est - 400.0) <= 3.0 * pred

    def test_moving_object_velocity_mismatch(self, tmp_path):
        code = main([
            "scenario", "--scenario", "moving_object", "--v1", "0.1", "--v2", "0.2",
            "--out", str(tmp_path),
        ])
        assert code == 2


class TestConfigFile:
    def test_precedence(self, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"kappa_min": 0.0, "kappa_max": 0.0,
                                   "kappa_step": 1.0, "sigma": 2.0}))
        out = tmp_path / "out"
        code = main([
            "qfi", "--config", str(cfg), "--strategy", "entangled_biphoton",
            "--pair", "time_sum_freq_diff", "--sigma", "1.0", "--out", str(out),
        ])
        assert code == 0
        _, rows = csv_rows(out / "qfi.csv")
        # flag --sigma 1.0 overrides config sigma 2.0; config supplies the grid
        assert float(rows[0]["sigma"]) == 1.0
        assert float(rows[0]["H11"]) == 2.0

    def test_config_without_flag_override(self, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"kappa_min": 0.0, "kappa_max": 0.0,
                                   "kappa_step": 1.0, "sigma": 2.0}))
        out = tmp_path / "out"
        code = main([
            "qfi", "--config", str(cfg), "--strategy", "entangled_biphoton",
            "--pair", "time_sum_freq_diff", "--out", str(out),
        ])
        assert code == 0
        _, rows = csv_rows(out / "qfi.csv")
        assert float(rows[0]["sigma"]) == 2.0
        assert float(rows[0]["H11"]) == 8.0

    def test_missing_config_io_error(self, tmp_path):
        code = main(["qfi", "--config", str(tmp_path / "absent.json"),
                     "--out", str(tmp_path)])
        assert code == 3

    def test_invalid_json_usage_error(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text("{not json")
        code = main(["qfi", "--config", str(cfg), "--out", str(tmp_path)])
        assert code == 2

    def test_unknown_key_usage_error(self, tmp_path):
        cfg = tmp_path / "bad.json"
        cfg.write_text(json.dumps({"sigmah": 2.0}))
        code = main(["qfi", "--config", str(cfg), "--out", str(tmp_path)])
        assert code == 2


class TestSelftestCommand:
    def test_json_output_parses(self, capsys, monkeypatch):
        monkeypatch.delenv("QFI_RADAR_SELFTEST_MUTATE", raising=False)
        code = main(["selftest", "--json"])
        assert code == 0
        records = json.loads(capsys.readouterr().out)
        assert len(records) == 9
        assert all(r["passed"] for r in records)
        assert {"criterion", "name", "passed", "seconds", "detail"} <= set(records[0])

    def test_mutation_hook_fails(self, capsys, monkeypatch):
        monkeypatch.setenv("QFI_RADAR_SELFTEST_MUTATE", "1")
        code = main(["selftest", "--json"])
        assert code == 1
        records = json.loads(capsys.readouterr().out)
        assert records[0]["passed"] is False
