import json
import shutil

import numpy as np
import pytest

from distkit.cli import main
from distkit.config import ConfigError, ExperimentConfig


def write_config(path, **overrides):
    base = {
        "model": {"name": "linear_drift"},
        "init": {"x_a": [1.5, 0.5]},
        "sim": {"horizon": 0.2, "dt": 0.01, "seed": 3},
        "samples": {"m": 4},
        "kernel": {"sigma": "auto"},
        "test": {"alpha": 0.05, "method": "bootstrap", "n_permutations": 100},
    }
    base.update(overrides)
    path.write_text(json.dumps(base))
    return path


class TestConfigParsing:
    def test_unknown_top_level_key(self, tmp_path):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"model": {"name": "duffing"}, "sim": {"horizon": 1, "dt": 0.1}, "typo": 1}))
        with pytest.raises(ConfigError, match="typo"):
            ExperimentConfig.from_file(cfg)

    def test_unknown_nested_key(self):
        with pytest.raises(ConfigError, match="alhpa.*in test"):
            ExperimentConfig.parse(json.dumps({
                "model": {"name": "duffing"},
                "sim": {"horizon": 1, "dt": 0.1},
                "test": {"alhpa": 0.05},
            }))

    def test_unknown_model(self):
        with pytest.raises(ConfigError, match="unknown model"):
            ExperimentConfig.parse(json.dumps({"model": {"name": "pendulum"}, "sim": {"horizon": 1, "dt": 0.1}}))

    def test_bad_alpha(self):
        with pytest.raises(ConfigError, match="alpha"):
            ExperimentConfig.parse(json.dumps({
                "model": {"name": "duffing"},
                "sim": {"horizon": 1, "dt": 0.1},
                "test": {"alpha": 1.5},
            }))

    def test_horizon_not_divisible(self):
        with pytest.raises(ConfigError, match="whole number"):
            ExperimentConfig.parse(json.dumps({"model": {"name": "duffing"}, "sim": {"horizon": 1.0, "dt": 0.3}}))

    def test_m_not_equal_n(self):
        with pytest.raises(ConfigError, match="m=10, n=20"):
            ExperimentConfig.parse(json.dumps({
                "model": {"name": "duffing"},
                "sim": {"horizon": 1, "dt": 0.1},
                "samples": {"m": 10, "n": 20},
            }))

    def test_serialize_parse_idempotent(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        parsed = ExperimentConfig.from_file(cfg)
        once = parsed.serialize()
        twice = ExperimentConfig.parse(once).serialize()
        assert once == twice


class TestSimulateCommand:
    def test_writes_expected_shape(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json", init={"states": [[1.5, 0.5]], "labels": ["ref"]})
        assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path)]) == 0
        lines = (tmp_path / "ref.csv").read_text().splitlines()
        assert lines[0] == "traj_id,t,y1"
        assert len(lines) == 1 + 4 * 21  # header + m * (T+1)

    def test_rerun_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", init={"states": [[0.0, 0.0]], "labels": ["s"]})
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        main(["simulate", "--config", str(cfg), "--out", str(out1)])
        main(["simulate", "--config", str(cfg), "--out", str(out2)])
        assert (out1 / "s.csv").read_bytes() == (out2 / "s.csv").read_bytes()

    def test_zero_noise_config_identical_trajectories(self, tmp_path):
        cfg = write_config(
            tmp_path / "c.json",
            model={"name": "linear_drift", "params": {"sigma_matrix": [[0, 0], [0, 0]], "meas_var": 0.0}},
            init={"states": [[1.0, 1.0]], "labels": ["quiet"]},
        )
        main(["simulate", "--config", str(cfg), "--out", str(tmp_path)])
        from distkit.io import load_sample_set_csv

        ss = load_sample_set_csv(tmp_path / "quiet.csv")
        base = ss.trajectories[0].values
        assert all(np.array_equal(tr.values, base) for tr in ss.trajectories)

    def test_seed_override_changes_output(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", init={"states": [[0.0, 0.0]], "labels": ["s"]})
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        main(["simulate", "--config", str(cfg), "--out", str(out1)])
        main(["simulate", "--config", str(cfg), "--seed", "999", "--out", str(out2)])
        assert (out1 / "s.csv").read_bytes() != (out2 / "s.csv").read_bytes()


class TestTestCommand:
    def _simulate_pair(self, tmp_path, x_a, x_b):
        cfg = write_config(
            tmp_path / "sim.json",
            init={"states": [list(x_a), list(x_b)], "labels": ["a", "b"]},
            samples={"m": 8},
        )
        main(["simulate", "--config", str(cfg), "--out", str(tmp_path)])
        return tmp_path / "a.csv", tmp_path / "b.csv"

    def test_file_against_copy_of_itself(self, tmp_path, capsys):
        a, _ = self._simulate_pair(tmp_path, (1.5, 0.5), (0.0, 0.0))
        copy = tmp_path / "a_copy.csv"
        shutil.copy(a, copy)
        cfg = write_config(tmp_path / "t.json")
        assert main(["test", str(a), str(copy), "--config", str(cfg)]) == 0
        out = capsys.readouterr().out
        assert "trigger = false" in out
        assert "mmd_hat = 0" in out

    def test_distant_states_trigger(self, tmp_path, capsys):
        a, b = self._simulate_pair(tmp_path, (1.5, 0.5), (30.0, -30.0))
        cfg = write_config(tmp_path / "t.json")
        main(["test", str(a), str(b), "--config", str(cfg), "--out", str(tmp_path)])
        out = capsys.readouterr().out
        assert "trigger = true" in out
        payload = json.loads((tmp_path / "test_result.json").read_text())
        assert payload["trigger"] is True
        assert payload["ratio"] > 1

    def test_mismatched_sizes_error_names_counts(self, tmp_path, capsys):
        a, b = self._simulate_pair(tmp_path, (1.5, 0.5), (0.0, 0.0))
        text = b.read_text().splitlines()
        trimmed = [text[0]] + [r for r in text[1:] if not r.startswith("7,")]
        b.write_text("\n".join(trimmed) + "\n")
        cfg = write_config(tmp_path / "t.json")
        assert main(["test", str(a), str(b), "--config", str(cfg)]) == 1
        err = capsys.readouterr().err
        assert "8 trajectories in A and 7 in B" in err


class TestSweepCommand:
    def test_smoke_grid_and_rerun_identical(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "c.json",
            grid={"lower": [0.0, -1.0], "upper": [3.0, 2.0], "points": [3, 3]},
            output={"dir": str(tmp_path / "out"), "prefix": "toy"},
        )
        assert main(["sweep", "--config", str(cfg), "--threads", "2"]) == 0
        out = tmp_path / "out"
        table = (out / "toy_table.csv").read_text().splitlines()
        assert table[0] == "x1,x2,mmd_hat,kappa,ratio,trigger,status"
        assert len(table) == 10
        header = json.loads((out / "toy_header.json").read_text())
        assert header["m"] == 4 and header["sigma"] > 0
        assert (out / "toy_class.json").exists()
        nominal = (out / "toy_nominal.csv").read_text().splitlines()
        assert nominal[0] == "t,x1,x2"
        assert len(nominal) == 22
        before = (out / "toy_table.csv").read_bytes()
        assert main(["sweep", "--config", str(cfg), "--threads", "1"]) == 0
        assert (out / "toy_table.csv").read_bytes() == before

    def test_missing_grid_is_config_error(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json")
        assert main(["sweep", "--config", str(cfg)]) == 1
        assert "grid" in capsys.readouterr().err


class TestGramianCommand:
    def test_json_output(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "c.json", sim={"horizon": 1.0, "dt": 0.01, "seed": 0})
        assert main(["gramian", "--config", str(cfg), "--out", str(tmp_path)]) == 0
        payload = json.loads((tmp_path / "gramian.json").read_text())
        assert payload["epsilon"] == 0.1
        assert len(payload["null_direction"]) == 2
        assert payload["eigenvalues"][0] <= payload["eigenvalues"][1]
        diag = np.ones(2) / np.sqrt(2)
        angle = np.degrees(np.arccos(abs(np.dot(payload["null_direction"], diag))))
        assert angle < 1.0


class TestSigmaCommand:
    def test_single_pair(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "sim.json",
            init={"states": [[1.5, 0.5], [0.0, 0.0]], "labels": ["a", "b"]},
        )
        main(["simulate", "--config", str(cfg), "--out", str(tmp_path)])
        capsys.readouterr()
        assert main(["sigma", str(tmp_path / "a.csv"), str(tmp_path / "b.csv")]) == 0
        sigma = float(capsys.readouterr().out.strip())
        assert sigma > 0

    def test_ten_synthetic_pairs_quantile(self, tmp_path, capsys):
        # pairs with known medians 1..10: the meta-heuristic picks 1.0
        for d in range(1, 11):
            for name, value in (("a", 0.0), ("b", float(d))):
                (tmp_path / f"{name}{d}.csv").write_text(f"traj_id,t,y1\n0,0,{value}\n")
        paths = []
        for d in range(1, 11):
            paths += [str(tmp_path / f"a{d}.csv"), str(tmp_path / f"b{d}.csv")]
        assert main(["sigma"] + paths) == 0
        assert float(capsys.readouterr().out.strip()) == 1.0

    def test_degenerate_data_is_explicit_error(self, tmp_path, capsys):
        (tmp_path / "same.csv").write_text("traj_id,t,y1\n0,0,1.0\n1,0,1.0\n")
        assert main(["sigma", str(tmp_path / "same.csv"), str(tmp_path / "same.csv")]) == 1
        assert "zero" in capsys.readouterr().err

    def test_odd_path_count_rejected(self, tmp_path, capsys):
        (tmp_path / "x.csv").write_text("traj_id,t,y1\n0,0,1.0\n")
        assert main(["sigma", str(tmp_path / "x.csv")]) == 1
        assert "even number" in capsys.readouterr().err


class TestThreadsEnvFallback:
    def test_env_var_used(self, tmp_path, monkeypatch, capsys):
        cfg = write_config(
            tmp_path / "c.json",
            grid={"lower": [0.0, -1.0], "upper": [3.0, 2.0], "points": [2, 2]},
            output={"dir": str(tmp_path / "o"), "prefix": "s"},
        )
        monkeypatch.setenv("DISTKIT_THREADS", "2")
        assert main(["sweep", "--config", str(cfg)]) == 0

    def test_invalid_env_var(self, tmp_path, monkeypatch, capsys):
        cfg = write_config(
            tmp_path / "c.json",
            grid={"lower": [0.0, -1.0], "upper": [3.0, 2.0], "points": [2, 2]},
        )
        monkeypatch.setenv("DISTKIT_THREADS", "lots")
        assert main(["sweep", "--config", str(cfg)]) == 1
        assert "DISTKIT_THREADS" in capsys.readouterr().err
