"""Experiment registry: config handling, determinism, and statistics."""

import io
import json
import math
import pathlib

import numpy as np
import pytest

from avglab.diophantine import BeattySet, dio_scan
from avglab.equidist import star_discrepancy
from avglab.experiments import (
    EXPERIMENTS,
    TRACE_HEADER,
    ConfigError,
    parse_config,
    run_experiment,
    serialize_config,
    write_summary,
    write_trace,
)
from avglab.orbits import Multiplier, SeedPoint, generate_orbit

EXP_DIR = pathlib.Path(__file__).resolve().parent.parent / "exp"

SPEC_ORDER = [
    "weyl-ud",
    "discrepancy-bound",
    "periodic-average",
    "sobol-singular",
    "bohr-average",
    "stepanov-average",
    "dio-scan",
    "renyi-parry",
    "normality",
]


def small_cfg(experiment, **overrides):
    base = {
        "weyl-ud": {
            "experiment": "weyl-ud",
            "multiplier": {"spec": "3/2"},
            "sampling": {"count": 4, "seed": 3},
            "schedule": {"checkpoints": [100, 200, 400]},
        },
        "discrepancy-bound": {
            "experiment": "discrepancy-bound",
            "multiplier": {"spec": "golden"},
            "sampling": {"count": 4, "seed": 3},
            "schedule": {"checkpoints": [100, 200, 400]},
        },
        "periodic-average": {
            "experiment": "periodic-average",
            "multiplier": {"spec": "3/2"},
            "sampling": {"count": 4, "seed": 3},
            "schedule": {"checkpoints": [100, 400]},
        },
        "sobol-singular": {
            "experiment": "sobol-singular",
            "multiplier": {"spec": "2"},
            "sampling": {"count": 3, "seed": 3, "bits": 1100},
            "schedule": {"checkpoints": [100, 300, 1000]},
        },
        "bohr-average": {
            "experiment": "bohr-average",
            "multiplier": {"spec": "3/2"},
            "sampling": {"count": 3, "seed": 3},
            "schedule": {"checkpoints": [100, 400]},
        },
        "stepanov-average": {
            "experiment": "stepanov-average",
            "multiplier": {"spec": "3/2"},
            "sampling": {"count": 3, "seed": 3},
            "schedule": {"checkpoints": [100, 400]},
            "thresholds": {"abs_tol": 0.2},
        },
        "dio-scan": {
            "experiment": "dio-scan",
            "multiplier": {"spec": "3/2"},
            "sampling": {"count": 5, "seed": 3},
            "schedule": {"checkpoints": [300]},
        },
        "renyi-parry": {
            "experiment": "renyi-parry",
            "multiplier": {"spec": "golden"},
            "sampling": {"count": 6, "seed": 3},
            "schedule": {"checkpoints": [500]},
            "thresholds": {"exp_tol": 0.1, "beta_tol": 0.1, "min_gap": 0.05},
        },
        "normality": {
            "experiment": "normality",
            "multiplier": {"spec": "2"},
            "sampling": {"count": 4, "seed": 3, "bits": 2064},
            "thresholds": {"digits": 2000, "block_max": 2, "abs_tol": 0.06},
        },
    }[experiment]
    for key, val in overrides.items():
        if isinstance(val, dict) and isinstance(base.get(key), dict):
            base[key] = {**base[key], **val}
        else:
            base[key] = val
    return base


class TestRegistry:
    def test_ids_and_order(self):
        assert list(EXPERIMENTS) == SPEC_ORDER

    def test_statements_are_prose(self):
        for exp in EXPERIMENTS.values():
            assert len(exp.statement) > 30
            assert exp.statement == exp.statement.strip()


class TestConfigRoundTrip:
    @pytest.mark.parametrize("name", SPEC_ORDER)
    def test_shipped_configs_round_trip(self, name):
        text = (EXP_DIR / f"{name}.toml").read_text()
        cfg = parse_config(text)
        assert cfg["experiment"] == name
        again = parse_config(serialize_config(cfg))
        assert again == cfg
        assert parse_config(serialize_config(again)) == again

    def test_serialize_handles_nested_values(self):
        cfg = {
            "experiment": "weyl-ud",
            "flag": True,
            "rate": 2.5,
            "multiplier": {"spec": "2"},
            "function": {"terms": [{"k": 1, "re": 3.0, "im": 0.0}]},
        }
        assert parse_config(serialize_config(cfg)) == cfg

    def test_invalid_toml_is_a_config_error(self):
        with pytest.raises(ConfigError, match="TOML"):
            parse_config("experiment = [unclosed")


class TestValidationErrors:
    def test_missing_experiment_names_key(self):
        with pytest.raises(ConfigError, match="^experiment:"):
            run_experiment({})

    def test_unknown_experiment_names_key(self):
        with pytest.raises(ConfigError, match="^experiment:"):
            run_experiment({"experiment": "nope"})

    def test_bad_count_names_dotted_path(self):
        cfg = small_cfg("periodic-average", sampling={"count": 0})
        with pytest.raises(ConfigError, match=r"^sampling\.count:"):
            run_experiment(cfg)

    def test_bad_interval_names_dotted_path(self):
        cfg = small_cfg("periodic-average",
                        sampling={"interval": [2.0, 1.0], "count": 2, "seed": 1})
        with pytest.raises(ConfigError, match=r"^sampling\.interval:"):
            run_experiment(cfg)

    def test_unsorted_checkpoints_rejected(self):
        cfg = small_cfg("periodic-average", schedule={"checkpoints": [400, 100]})
        with pytest.raises(ConfigError, match=r"^schedule\.checkpoints:"):
            run_experiment(cfg)

    def test_checkpoint_element_path_has_index(self):
        cfg = small_cfg("periodic-average", schedule={"checkpoints": [100, "x"]})
        with pytest.raises(ConfigError, match=r"^schedule\.checkpoints\[1\]:"):
            run_experiment(cfg)

    def test_wrong_function_type_named(self):
        cfg = small_cfg("periodic-average",
                        function={"type": "step", "breaks": [1.0], "values": [1.0]})
        with pytest.raises(ConfigError, match=r"^function\.type:"):
            run_experiment(cfg)

    def test_multiplier_invariant_reported(self):
        cfg = small_cfg("periodic-average", multiplier={"spec": "1"})
        with pytest.raises(ConfigError, match=r"^multiplier\.spec:.*alpha"):
            run_experiment(cfg)

    def test_even_integer_multiplier_needs_wide_seeds(self):
        cfg = small_cfg("periodic-average", multiplier={"spec": "2"},
                        schedule={"checkpoints": [100, 400]})
        with pytest.raises(ConfigError, match=r"^sampling\.bits:.*truncates"):
            run_experiment(cfg)

    def test_odd_integer_multiplier_passes_guard(self):
        cfg = small_cfg("periodic-average", multiplier={"spec": "3"})
        run_experiment(cfg)

    def test_normality_requires_integer_base(self):
        cfg = small_cfg("normality", multiplier={"spec": "3/2"})
        with pytest.raises(ConfigError, match=r"^multiplier\.spec:.*integer base"):
            run_experiment(cfg)

    def test_normality_bits_floor_named(self):
        cfg = small_cfg("normality",
                        sampling={"count": 2, "seed": 1, "bits": 256})
        with pytest.raises(ConfigError, match=r"^sampling\.bits:"):
            run_experiment(cfg)

    def test_bohr_truncation_beyond_terms_rejected(self):
        cfg = small_cfg("bohr-average",
                        thresholds={"m_values": [0, 9]})
        with pytest.raises(ConfigError, match=r"^thresholds\.m_values:"):
            run_experiment(cfg)

    def test_unknown_point_set_type_named(self):
        cfg = small_cfg("dio-scan", point_set={"type": "fractal"})
        with pytest.raises(ConfigError, match=r"^point_set\.type:"):
            run_experiment(cfg)


class TestDeterminism:
    def test_rerun_identical_rows(self):
        cfg = small_cfg("weyl-ud")
        a = run_experiment(cfg)
        b = run_experiment(cfg)
        assert a.rows == b.rows
        assert a.summary == b.summary

    def test_threads_do_not_change_rows(self):
        cfg = small_cfg("periodic-average")
        one = run_experiment(cfg, threads=1)
        four = run_experiment(cfg, threads=4)
        assert one.rows == four.rows
        assert one.summary == four.summary

    def test_seed_override_changes_rows_and_is_recorded(self):
        cfg = small_cfg("periodic-average")
        base = run_experiment(cfg)
        other = run_experiment(cfg, seed=99)
        assert other.summary["seed"] == 99
        assert base.rows != other.rows
        # the override does not leak into the caller's mapping
        assert cfg["sampling"]["seed"] == 3

    def test_rows_sorted_by_sample_then_checkpoint(self):
        res = run_experiment(small_cfg("weyl-ud"))
        keys = [(r[2], r[3]) for r in res.rows]
        assert keys == sorted(keys)

    def test_trace_bytes_stable(self):
        res = run_experiment(small_cfg("dio-scan"))
        bufs = []
        for _ in range(2):
            buf = io.StringIO()
            write_trace(res.rows, buf)
            bufs.append(buf.getvalue())
        assert bufs[0] == bufs[1]
        assert bufs[0].splitlines()[0] == TRACE_HEADER

    def test_summary_json_sorted_keys(self):
        res = run_experiment(small_cfg("normality"))
        buf = io.StringIO()
        write_summary(res.summary, buf)
        parsed = json.loads(buf.getvalue())
        assert parsed == json.loads(json.dumps(res.summary))
        keys = list(json.loads(buf.getvalue(),
                               object_pairs_hook=lambda p: [k for k, _ in p]))
        assert keys == sorted(keys)


class TestTraceShape:
    def test_row_tuples_have_ten_fields(self):
        res = run_experiment(small_cfg("weyl-ud"))
        assert TRACE_HEADER.count(",") == 9
        for row in res.rows:
            assert len(row) == 10

    def test_alpha_column_is_spec_string(self):
        res = run_experiment(small_cfg("discrepancy-bound"))
        assert {r[1] for r in res.rows} == {"1/2+1/2*sqrt(5)"}

    def test_csv_parses_back_to_floats(self):
        res = run_experiment(small_cfg("periodic-average"))
        buf = io.StringIO()
        write_trace(res.rows, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == TRACE_HEADER
        for line, row in zip(lines[1:], res.rows):
            parts = line.split(",")
            assert parts[0] == row[0]
            assert int(parts[2]) == row[2]
            assert int(parts[3]) == row[3]
            assert float(parts[5]) == row[5]
            assert float(parts[9]) == row[9] or (
                math.isnan(float(parts[9])) and math.isnan(row[9]))


class TestStatisticsAgainstLibrary:
    def test_weyl_ud_star_matches_direct_orbit(self):
        cfg = small_cfg("weyl-ud")
        res = run_experiment(cfg)
        m = Multiplier.parse("3/2")
        sp = SeedPoint.sampled(3, 0, interval=(1.0, 2.0), bits=53)
        orbit = generate_orbit(m, sp, 400)
        expect = star_discrepancy(orbit.values()[:100])
        got = [r for r in res.rows
               if r[2] == 0 and r[3] == 100 and r[4] == "star"]
        assert len(got) == 1
        assert got[0][5] == pytest.approx(expect, abs=0.0)

    def test_periodic_average_target_and_error_columns(self):
        res = run_experiment(small_cfg("periodic-average"))
        for row in res.rows:
            assert row[7] == 2.0 and row[8] == 0.0
            # certified column: Lipschitz constant of 3 e(x) times orbit error
            assert 0.0 < row[9] < 1e-10

    def test_sobol_target_is_singular_integral(self):
        res = run_experiment(small_cfg("sobol-singular"))
        target = res.summary["target"]
        assert target[0] == pytest.approx(4.0 / 3.0, abs=1e-9)
        assert target[1] == pytest.approx(0.0, abs=1e-12)

    def test_dio_scan_rows_match_direct_scan(self):
        cfg = small_cfg("dio-scan")
        res = run_experiment(cfg)
        m = Multiplier.parse("3/2")
        sp = SeedPoint.sampled(3, 2, interval=(1.0, 2.0), bits=53)
        from avglab.diophantine import integers

        direct = dio_scan(m, sp, integers(), 0.5, 300)
        by_stat = {r[4]: r[5] for r in res.rows if r[2] == 2}
        assert by_stat["violation_count"] == len(direct["violations"])
        assert by_stat["max_violation"] == max(direct["violations"], default=0)
        assert by_stat["hit_count"] == len(direct["hits"])

    def test_renyi_summary_targets(self):
        res = run_experiment(small_cfg("renyi-parry"))
        s = res.summary
        assert s["lebesgue_mean"] == pytest.approx(0.6180339887, abs=1e-9)
        assert s["density_integral"] == pytest.approx(0.7236067977, abs=1e-9)
        hist = s["beta_histogram"]
        widths = np.diff(np.asarray(hist["edges"]))
        assert float(np.sum(widths * np.asarray(hist["density"]))) == pytest.approx(1.0, abs=1e-9)
        steps = s["density"]
        assert steps["breaks"][-1] == 1.0
        assert steps["values"][0] == pytest.approx((5 + 3 * math.sqrt(5)) / 10, abs=1e-12)

    def test_normality_frequencies_sum_to_one(self):
        res = run_experiment(small_cfg("normality"))
        for xi in range(4):
            for L in (1, 2):
                freqs = [r[5] for r in res.rows
                         if r[2] == xi and r[4].startswith(f"freq_L{L}_")]
                assert len(freqs) == 2 ** L
                assert sum(freqs) == pytest.approx(1.0, abs=1e-12)

    def test_stepanov_target_matches_point_density(self):
        cfg = small_cfg("stepanov-average")
        res = run_experiment(cfg)
        target = res.summary["target"][0]
        # oracle: background mean 0.7 plus empirical spike density times
        # the closed-form mass of one spike
        slope = Multiplier.parse("sqrt(2)")
        pts = BeattySet(slope).points_between(0, 20000)
        density = len([p for p in pts if 0 <= p < 20000]) / 20000.0
        mass = 2.0 * 0.1 * 0.25 ** 0.75 / 0.75
        assert target == pytest.approx(0.7 + density * mass, abs=1e-3)

    def test_bohr_sandwich_bound_holds(self):
        res = run_experiment(small_cfg("bohr-average"))
        assert res.summary["max_sandwich_excess"] <= 0.0
        assert res.summary["means_ok"] is True


class TestPredicates:
    def test_tight_tolerance_fails_predicate(self):
        cfg = small_cfg("periodic-average",
                        thresholds={"abs_tol": 1e-9, "ok_fraction": 0.9})
        res = run_experiment(cfg)
        assert res.passed is False
        assert res.summary["passed"] is False

    def test_summary_carries_required_keys(self):
        for name in ("weyl-ud", "dio-scan", "renyi-parry"):
            res = run_experiment(small_cfg(name))
            for key in ("experiment", "statement", "passed", "alpha",
                        "count", "seed"):
                assert key in res.summary, (name, key)
