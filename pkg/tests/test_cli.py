"""Command line behavior: exit codes, output files, reproducibility."""

import json
import pathlib
import subprocess
import sys

import pytest

PKG_ROOT = pathlib.Path(__file__).resolve().parent.parent

SMALL_RUN = """\
experiment = "periodic-average"

[multiplier]
spec = "3/2"

[sampling]
count = 4
seed = 3

[schedule]
checkpoints = [100, 400]

[thresholds]
abs_tol = 0.5
"""


def avglab(*args, env=None):
    cmd = [sys.executable, "-m", "avglab.cli", *args]
    extra = dict(env or {})
    import os

    full_env = {**os.environ, **extra}
    return subprocess.run(cmd, capture_output=True, text=True, env=full_env,
                          cwd=PKG_ROOT)


class TestList:
    def test_nine_rows_in_stable_order(self):
        first = avglab("list")
        second = avglab("list")
        assert first.returncode == 0
        assert first.stdout == second.stdout
        lines = first.stdout.splitlines()
        assert [ln.split(":")[0] for ln in lines] == [
            "weyl-ud", "discrepancy-bound", "periodic-average",
            "sobol-singular", "bohr-average", "stepanov-average",
            "dio-scan", "renyi-parry", "normality",
        ]
        for ln in lines:
            assert len(ln.split(": ", 1)[1]) > 30


class TestOrbit:
    def test_known_orbit_values(self):
        r = avglab("orbit", "--alpha", "3/2", "--x", "1", "--n", "5")
        assert r.returncode == 0
        lines = r.stdout.splitlines()
        assert lines[0] == "n,frac"
        got = [ln.split(",") for ln in lines[1:]]
        # <(3/2)^(n-1)>: 1, 3/2, 9/4, 27/8, 81/16
        expect = ["0", "0.5", "0.25", "0.375", "0.0625"]
        assert [g[1] for g in got] == expect
        assert [g[0] for g in got] == ["1", "2", "3", "4", "5"]

    def test_error_bound_on_stderr(self):
        r = avglab("orbit", "--alpha", "golden", "--x", "1", "--n", "3")
        assert r.returncode == 0
        assert "guaranteed_abs_error" in r.stderr

    def test_bad_alpha_exits_one(self):
        r = avglab("orbit", "--alpha", "1", "--x", "1", "--n", "3")
        assert r.returncode == 1
        assert "alpha" in r.stderr


class TestRun:
    def test_pass_run_writes_outputs(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(SMALL_RUN)
        out = tmp_path / "out"
        r = avglab("run", "--config", str(cfg), "--out", str(out))
        assert r.returncode == 0, r.stderr
        trace = (out / "trace.csv").read_text()
        summary = json.loads((out / "summary.json").read_text())
        assert trace.splitlines()[0] == (
            "experiment,alpha,x_index,N,stat,re,im,target_re,target_im,abs_err")
        assert summary["experiment"] == "periodic-average"
        assert summary["passed"] is True

    def test_identical_bytes_on_rerun(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(SMALL_RUN)
        outs = []
        for name in ("a", "b"):
            out = tmp_path / name
            r = avglab("run", "--config", str(cfg), "--out", str(out))
            assert r.returncode == 0
            outs.append(((out / "trace.csv").read_bytes(),
                         (out / "summary.json").read_bytes()))
        assert outs[0] == outs[1]

    def test_threads_preserve_bytes(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(SMALL_RUN)
        blobs = []
        for name, threads in (("one", "1"), ("four", "4")):
            out = tmp_path / name
            r = avglab("run", "--config", str(cfg), "--out", str(out),
                       "--threads", threads)
            assert r.returncode == 0
            blobs.append((out / "trace.csv").read_bytes())
        assert blobs[0] == blobs[1]

    def test_seed_override_changes_trace(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(SMALL_RUN)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert avglab("run", "--config", str(cfg), "--out", str(out_a)).returncode == 0
        assert avglab("run", "--config", str(cfg), "--out", str(out_b),
                      "--seed", "99").returncode == 0
        assert (out_a / "trace.csv").read_bytes() != (out_b / "trace.csv").read_bytes()

    def test_custom_output_names(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(SMALL_RUN + '\n[output]\ntrace = "t.csv"\nsummary = "s.json"\n')
        out = tmp_path / "out"
        r = avglab("run", "--config", str(cfg), "--out", str(out))
        assert r.returncode == 0
        assert (out / "t.csv").exists()
        assert (out / "s.json").exists()

    def test_predicate_failure_exits_two(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(SMALL_RUN.replace("abs_tol = 0.5", "abs_tol = 1e-9"))
        r = avglab("run", "--config", str(cfg), "--out", str(tmp_path / "o"))
        assert r.returncode == 2
        assert "FAIL" in r.stdout

    def test_modulus_one_multiplier_exits_one(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(SMALL_RUN.replace('spec = "3/2"', 'spec = "-1"'))
        r = avglab("run", "--config", str(cfg), "--out", str(tmp_path / "o"))
        assert r.returncode == 1
        assert "multiplier.spec" in r.stderr
        assert "alpha" in r.stderr

    def test_schema_violation_names_key_path(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(SMALL_RUN.replace("count = 4", "count = -4"))
        r = avglab("run", "--config", str(cfg), "--out", str(tmp_path / "o"))
        assert r.returncode == 1
        assert "sampling.count" in r.stderr

    def test_missing_config_exits_one(self, tmp_path):
        r = avglab("run", "--config", str(tmp_path / "absent.toml"),
                   "--out", str(tmp_path / "o"))
        assert r.returncode == 1
        assert "cannot read config" in r.stderr

    def test_malformed_toml_exits_one(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text("experiment = [broken")
        r = avglab("run", "--config", str(cfg), "--out", str(tmp_path / "o"))
        assert r.returncode == 1
        assert "TOML" in r.stderr

    def test_bad_budget_env_exits_one(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(SMALL_RUN)
        r = avglab("run", "--config", str(cfg), "--out", str(tmp_path / "o"),
                   env={"AVGLAB_PRECISION_BUDGET_MB": "banana"})
        assert r.returncode == 1
        assert "AVGLAB_PRECISION_BUDGET_MB" in r.stderr

    def test_tiny_budget_exits_one(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text(SMALL_RUN)
        r = avglab("run", "--config", str(cfg), "--out", str(tmp_path / "o"),
                   env={"AVGLAB_PRECISION_BUDGET_MB": "1e-7"})
        assert r.returncode == 1
        assert r.stderr.strip() != ""


class TestShippedConfigs:
    @pytest.mark.parametrize("name", [
        "weyl-ud", "discrepancy-bound", "periodic-average", "sobol-singular",
        "bohr-average", "stepanov-average", "dio-scan", "renyi-parry",
        "normality",
    ])
    def test_config_file_validates(self, name):
        from avglab.experiments import EXPERIMENTS, parse_config

        text = (PKG_ROOT / "exp" / f"{name}.toml").read_text()
        cfg = parse_config(text)
        EXPERIMENTS[cfg["experiment"]].validate(cfg)
