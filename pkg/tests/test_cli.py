import json

import numpy as np
import pytest

from invreg.cli import main
from invreg.tables import parse_per_rep_errors, parse_risk_table


def write_config(tmp_path, payload, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def rates_config(**overrides):
    base = {
        "problem": {"kind": "green", "truth": "hat"},
        "filter": {"family": "tikhonov"},
        "sigmas": [1e-2, 1e-3],
        "replications": 8,
        "modes": 32,
        "master_seed": 3,
    }
    base.update(overrides)
    return base


class TestSimulateRates:
    def test_writes_tables_and_metadata(self, tmp_path):
        cfg = write_config(tmp_path, rates_config())
        out = tmp_path / "out"
        assert main(["simulate-rates", "--config", cfg, "--out", str(out)]) == 0
        table = parse_risk_table(out / "risk_table.csv")
        assert len(table.rows) == 2
        groups = parse_per_rep_errors(out / "per_rep_errors.csv")
        assert all(g["pred"].size == 8 for g in groups.values())
        meta = json.loads((out / "metadata.json").read_text())
        assert meta["command"] == "simulate-rates"
        assert meta["master_seed"] == 3
        assert "wall_time_s" in meta

    def test_reruns_are_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, rates_config())
        out1, out2 = tmp_path / "a", tmp_path / "b"
        assert main(["simulate-rates", "--config", cfg, "--out", str(out1)]) == 0
        assert main(["simulate-rates", "--config", cfg, "--out", str(out2)]) == 0
        assert (out1 / "risk_table.csv").read_bytes() == (out2 / "risk_table.csv").read_bytes()
        assert (out1 / "per_rep_errors.csv").read_bytes() == (out2 / "per_rep_errors.csv").read_bytes()

    def test_workers_do_not_change_output(self, tmp_path):
        cfg = write_config(tmp_path, rates_config())
        out1, out8 = tmp_path / "w1", tmp_path / "w8"
        assert main(["simulate-rates", "--config", cfg, "--out", str(out1), "--workers", "1"]) == 0
        assert main(["simulate-rates", "--config", cfg, "--out", str(out8), "--workers", "8"]) == 0
        assert (out1 / "risk_table.csv").read_bytes() == (out8 / "risk_table.csv").read_bytes()

    def test_seed_override(self, tmp_path):
        cfg = write_config(tmp_path, rates_config())
        out1, out2 = tmp_path / "s3", tmp_path / "s4"
        assert main(["simulate-rates", "--config", cfg, "--out", str(out1)]) == 0
        assert main(["simulate-rates", "--config", cfg, "--out", str(out2), "--seed", "4"]) == 0
        assert (out1 / "risk_table.csv").read_bytes() != (out2 / "risk_table.csv").read_bytes()
        meta = json.loads((out2 / "metadata.json").read_text())
        assert meta["master_seed"] == 4


class TestConfigValidation:
    def test_unknown_key_exits_2(self, tmp_path, capsys):
        cfg = write_config(tmp_path, rates_config(replicatons=8))
        assert main(["simulate-rates", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
        assert "replicatons" in capsys.readouterr().err

    def test_missing_key_exits_2(self, tmp_path, capsys):
        payload = rates_config()
        del payload["replications"]
        cfg = write_config(tmp_path, payload)
        assert main(["simulate-rates", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
        assert "replications" in capsys.readouterr().err

    def test_invalid_json_reports_position(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text('{"problem": }')
        assert main(["simulate-rates", "--config", str(path), "--out", str(tmp_path / "o")]) == 2
        err = capsys.readouterr().err
        assert "broken.json:1:" in err

    def test_missing_file_exits_2(self, tmp_path):
        assert main(["simulate-rates", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o")]) == 2

    def test_bad_filter_family_exits_2(self, tmp_path):
        cfg = write_config(tmp_path, rates_config(filter={"family": "ridge"}))
        assert main(["simulate-rates", "--config", cfg, "--out", str(tmp_path / "o")]) == 2

    def test_bad_frame_exits_2(self, tmp_path):
        cfg = write_config(
            tmp_path, rates_config(problem={"kind": "green", "truth": "hat", "frame": "weird"})
        )
        assert main(["simulate-rates", "--config", cfg, "--out", str(tmp_path / "o")]) == 2


class TestSimulateEfficiency:
    def test_writes_efficiency_csv(self, tmp_path):
        payload = {
            "problem": {"kind": "diagonal", "a": 4.0, "nu": 4.0},
            "filter": {"family": "tikhonov"},
            "sigmas": [1e-2, 1e-3],
            "replications": 20,
            "modes": 40,
            "master_seed": 5,
        }
        cfg = write_config(tmp_path, payload)
        out = tmp_path / "out"
        assert main(["simulate-efficiency", "--config", cfg, "--out", str(out)]) == 0
        lines = (out / "efficiency.csv").read_text().splitlines()
        assert lines[0] == "sigma,eff_pred,eff_lep"
        assert len(lines) == 3


class TestScoreCurve:
    def test_emits_alpha_score_pairs(self, tmp_path):
        payload = {
            "problem": {"kind": "green", "truth": "hat"},
            "filter": {"family": "tikhonov"},
            "sigmas": [1e-2],
            "modes": 64,
            "master_seed": 9,
        }
        cfg = write_config(tmp_path, payload)
        out = tmp_path / "out"
        assert main(["score-curve", "--config", cfg, "--out", str(out)]) == 0
        lines = (out / "score_curve.csv").read_text().splitlines()
        assert lines[0] == "alpha,score"
        assert len(lines) > 10
        scores = np.array([float(l.split(",")[1]) for l in lines[1:]])
        # the landscape is flat near its minimum: neighbors of the argmin
        # stay within a small fraction of the score range
        i = int(np.argmin(scores))
        span = scores.max() - scores.min()
        for j in (max(i - 1, 0), min(i + 1, scores.size - 1)):
            assert scores[j] - scores[i] <= 0.05 * span


class TestRateTestCommand:
    def test_pipeline_composition(self, tmp_path):
        cfg = write_config(tmp_path, rates_config(replications=30, sigmas=[1e-2, 1e-3, 1e-4]))
        sim_out = tmp_path / "sim"
        assert main(["simulate-rates", "--config", cfg, "--out", str(sim_out)]) == 0
        rt_cfg = write_config(
            tmp_path,
            {
                "rate_test": {
                    "errors_csv": str(sim_out / "per_rep_errors.csv"),
                    "risk": "pred",
                    "theta_target": 0.75,
                }
            },
            name="rt.json",
        )
        rt_out = tmp_path / "rt"
        assert main(["rate-test", "--config", rt_cfg, "--out", str(rt_out)]) == 0
        result = json.loads((rt_out / "rate_test.json").read_text())
        for key in ("theta_hat", "rho_hat", "statistic", "p_value"):
            assert key in result
        assert 0.0 <= result["p_value"] <= 1.0

    def test_bad_risk_name_exits_2(self, tmp_path):
        rt_cfg = write_config(
            tmp_path,
            {"rate_test": {"errors_csv": "x.csv", "risk": "direct", "theta_target": 0.75}},
        )
        assert main(["rate-test", "--config", rt_cfg, "--out", str(tmp_path / "o")]) == 2

    def test_missing_errors_csv_exits_3(self, tmp_path):
        rt_cfg = write_config(
            tmp_path,
            {"rate_test": {"errors_csv": str(tmp_path / "nope.csv"), "theta_target": 0.75}},
        )
        assert main(["rate-test", "--config", rt_cfg, "--out", str(tmp_path / "o")]) == 3


class TestFiltersCheckCommand:
    def test_clean_run(self, tmp_path):
        cfg = write_config(tmp_path, {"pairs": 200})
        out = tmp_path / "out"
        assert main(["filters-check", "--config", cfg, "--out", str(out)]) == 0
        report = json.loads((out / "filters_check.json").read_text())
        assert report["total_violations"] == 0
