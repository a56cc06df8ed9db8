import json
from dataclasses import replace

import numpy as np
import pytest

from rotsym import montecarlo as mc
from rotsym.errors import ConfigError


SMALL = mc.ExperimentConfig(
    scenario="te_grid",
    p=3,
    n=60,
    reps=120,
    ell_grid=(0, 3),
    tests=("s-loc", "s-sc", "u-sc"),
    base_seed=11,
)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ConfigError):
            mc.ExperimentConfig(scenario="nope")
        with pytest.raises(ConfigError):
            mc.ExperimentConfig(scenario="te_grid", reps=0)
        with pytest.raises(ConfigError):
            mc.ExperimentConfig(scenario="te_grid", level=1.5)
        with pytest.raises(ConfigError):
            mc.ExperimentConfig(scenario="te_grid", ell_grid=())
        with pytest.raises(ConfigError):
            mc.ExperimentConfig(scenario="te_grid", tests=("s-loc", "bogus"))

    def test_default_axis(self):
        cfg = mc.ExperimentConfig(scenario="tm_grid", p=5)
        np.testing.assert_array_equal(cfg.resolved_theta(), [1, 0, 0, 0, 0])
        np.testing.assert_array_equal(cfg.resolved_theta_true(), cfg.resolved_theta())

    def test_shape_matrix_severity(self):
        for p in (3, 5):
            for ell in (0, 2, 5):
                lam = mc.shape_matrix_at(ell, p)
                assert np.trace(lam) == pytest.approx(p - 1)
        np.testing.assert_allclose(mc.shape_matrix_at(0, 4), np.eye(3))

    def test_load_config(self, tmp_path):
        path = tmp_path / "exp.toml"
        path.write_text(
            'scenario = "tm_grid"\np = 3\nn = 50\nreps = 10\n'
            "ell_grid = [0, 2]\ntests = [\"s-loc\"]\nbase_seed = 5\n"
        )
        cfg = mc.load_config(path)
        assert cfg.scenario == "tm_grid"
        assert cfg.ell_grid == (0, 2)
        assert cfg.tests == ("s-loc",)

    def test_load_config_rejects_unknown_keys(self, tmp_path):
        path = tmp_path / "exp.toml"
        path.write_text('scenario = "te_grid"\nbogus = 1\n')
        with pytest.raises(ConfigError):
            mc.load_config(path)

    def test_load_config_rejects_bad_toml(self, tmp_path):
        path = tmp_path / "exp.toml"
        path.write_text("scenario = [oops\n")
        with pytest.raises(ConfigError):
            mc.load_config(path)


class TestDeterminism:
    def test_worker_count_invariant(self):
        serial = mc.run_experiment(SMALL)
        parallel = mc.run_experiment(replace(SMALL, workers=3))
        assert serial.rows == parallel.rows

    def test_repeatable(self):
        assert mc.run_experiment(SMALL).rows == mc.run_experiment(SMALL).rows

    def test_seed_changes_results(self):
        other = mc.run_experiment(replace(SMALL, base_seed=12))
        assert other.rows != mc.run_experiment(SMALL).rows

    def test_replicate_streams_distinct(self):
        a = mc._replicate_rng(0, "te_grid", 0, 0).standard_normal(4)
        b = mc._replicate_rng(0, "te_grid", 0, 1).standard_normal(4)
        c = mc._replicate_rng(0, "te_grid", 1, 0).standard_normal(4)
        assert not np.allclose(a, b)
        assert not np.allclose(a, c)


class TestPowerTable:
    def test_rows_and_lookup(self):
        table = mc.run_experiment(SMALL)
        assert len(table.rows) == len(SMALL.ell_grid) * len(SMALL.tests)
        assert 0.0 <= table.freq("s-sc", 3) <= 1.0
        with pytest.raises(KeyError):
            table.freq("s-sc", 99)

    def test_csv_and_json_roundtrip(self, tmp_path):
        table = mc.run_experiment(SMALL)
        csv_path = tmp_path / "table.csv"
        table.to_csv(csv_path)
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "test,ell,n,p,freq,se,N"
        assert len(lines) == 1 + len(table.rows)
        payload = json.loads(table.to_json())
        assert payload["rows"] == [dict(r) for r in table.rows]
        json_path = tmp_path / "table.json"
        table.to_json(json_path)
        assert json.loads(json_path.read_text())["rows"] == payload["rows"]

    def test_power_ordering(self):
        # scatter alternative: the scatter test gains power with severity,
        # the location test stays near its level
        table = mc.run_experiment(replace(SMALL, reps=300))
        assert table.freq("s-sc", 3) > table.freq("s-sc", 0) + 0.2
        assert table.freq("s-loc", 3) < 0.15


class TestScenarios:
    @pytest.mark.parametrize(
        "scenario", ["te_grid", "tm_grid", "mixture_vmf", "mixture_te_tm", "high_dim_null"]
    )
    def test_all_scenarios_run(self, scenario):
        cfg = mc.ExperimentConfig(
            scenario=scenario,
            p=3,
            n=40,
            reps=8,
            ell_grid=(1,),
            tests=("s-loc", "s-sc"),
            base_seed=3,
        )
        table = mc.run_experiment(cfg)
        assert len(table.rows) == 2

    def test_misspecified_axis_hurts_specified_tests(self):
        cfg = mc.ExperimentConfig(
            scenario="misspecified_theta",
            p=3,
            n=150,
            reps=200,
            ell_grid=(0,),
            tests=("s-cov", "u-loc"),
            theta=(1.0, 0.0, 0.0),
            theta_true=(np.sqrt(0.5), -np.sqrt(0.5), 0.0),
            base_seed=21,
        )
        table = mc.scenario_misspecified(cfg)
        assert table.freq("s-cov", 0) > 0.15
        assert 0.0 <= table.freq("u-loc", 0) <= 0.12


class TestLocalAlternativeValidation:
    def test_te_matched_record(self):
        rec = mc.local_alternative_validation(
            p=3, n=150, test="s-sc", alternative_kind="te",
            strength=1.5 * np.diag([1.0, -1.0]), reps=200, base_seed=2,
        )
        assert rec["noncentrality"] == pytest.approx(1.125)
        assert 0.0 <= rec["empirical"] <= 1.0
        assert rec["predicted"] > rec["se"]

    def test_blind_pairing_predicts_level(self):
        rec = mc.local_alternative_validation(
            p=3, n=100, test="s-loc", alternative_kind="te",
            strength=np.diag([1.0, -1.0]), reps=50, base_seed=3,
        )
        assert rec["predicted"] == 0.05

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            mc.local_alternative_validation(
                p=3, n=50, test="s-loc", alternative_kind="xx", strength=1.0, reps=5
            )
