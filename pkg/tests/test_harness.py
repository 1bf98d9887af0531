import json
import subprocess
import sys

import numpy as np
import pytest

from haarforge.cli import main
from haarforge.config import ExperimentConfig, ExperimentReport
from haarforge.enumeration import (enumerate_sn_check, enumerate_wreath_check, wreath_eigenvalues,
                                   z2_wreath_pushforward_det)
from haarforge.groups import make_rng
from haarforge.harness import EXPERIMENTS, acceptance_config, run, sharded, worker_count
from haarforge.permutations import WreathElement, Permutation, wreath_matrix
from haarforge.stats import binned_counts, ks_one_sample, ks_two_sample, mean_se, self_normalized_is, z_score


# -- statistics -----------------------------------------------------------------

def test_ks_trivial_cases():
    x = np.linspace(0, 1, 50)
    assert ks_two_sample(x, x) == 0.0
    assert ks_two_sample(np.zeros(10), np.ones(7)) == 1.0
    with pytest.raises(ValueError):
        ks_two_sample([], [1.0])
    with pytest.raises(ValueError):
        ks_one_sample([], lambda t: t)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_ks_null_calibration(seed):
    a = make_rng(seed, 0).random(100_000)
    b = make_rng(seed, 1).random(100_000)
    assert ks_two_sample(a, b) <= 0.01


def test_self_normalized_is_uniform_weights():
    f = np.arange(10.0)
    est, se = self_normalized_is(f, np.ones(10))
    assert est == pytest.approx(4.5)
    assert se == pytest.approx(np.std(f) / np.sqrt(10))


def test_z_score_zero_variance():
    assert z_score(1.0, 0.0, 1.0, 0.0) == 0.0
    assert z_score(1.0, 0.0, 1.1, 0.0) == float("inf")
    assert z_score(1.0, 0.3, 0.4, 0.4) == pytest.approx(1.2)


def test_binned_counts():
    c = binned_counts(np.array([[0.1, 0.2, 0.9], [0.5, 0.5, 0.5]]), np.array([0.0, 0.5, 1.0]))
    assert np.array_equal(c, [[2, 1], [0, 3]])
    m, se = mean_se([1.0, 1.0, 1.0])
    assert (m, se) == (1.0, 0.0)


# -- enumeration oracles ----------------------------------------------------------

def test_enumerate_sn_examples():
    r = enumerate_sn_check(3, 1.0)
    assert r["max_deviation"] == pytest.approx(0.0, abs=1e-16)
    assert r["support"] == 6
    assert enumerate_sn_check(4, 2.0)["max_deviation"] <= 1e-12
    for th in (0.5, 1.0, 2.0):
        for n in range(1, 5):
            assert enumerate_sn_check(n, th)["max_deviation"] <= 1e-14
    with pytest.raises(ValueError):
        enumerate_sn_check(6, 1.0)


@pytest.mark.parametrize("method", ["steps", "det"])
def test_enumerate_wreath_examples(method):
    assert enumerate_wreath_check(3, 1.0, method)["max_deviation"] <= 1e-12
    assert enumerate_wreath_check(3, 0.5, method)["max_deviation"] <= 1e-12
    r = enumerate_wreath_check(4, 1.0, method)
    assert r["theta"] == 2.0
    assert r["max_deviation"] <= 1e-12
    with pytest.raises(ValueError):
        enumerate_wreath_check(5, 1.0, method)


def test_wreath_enumeration_fractional_delta():
    assert enumerate_wreath_check(3, 0.3, "det")["max_deviation"] <= 1e-12


def test_wreath_eigenvalues_match_matrix(rng):
    from haarforge.permutations import sample_wreath
    for _ in range(20):
        w = sample_wreath(4, "T", rng)
        a = np.sort_complex(np.round(wreath_eigenvalues(w), 10))
        b = np.sort_complex(np.round(np.linalg.eigvals(wreath_matrix(w)), 10))
        assert np.allclose(a, b)


def test_det_pushforward_is_normalized():
    law = z2_wreath_pushforward_det(3, 1.0)
    assert sum(law.values()) == pytest.approx(1.0)


# -- configuration and reports ------------------------------------------------------

@pytest.mark.parametrize("kw", [{"samples": 0}, {"n": 0}, {"delta": (-0.6, 0.0)}, {"theta": -1.0},
                                {"format": "xml"}, {"shards": 0}])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        ExperimentConfig("identities", **kw)


def test_config_tolerance_override():
    cfg = ExperimentConfig("identities", tolerances={"ks": 0.02})
    assert cfg.tol("ks", 0.01) == 0.02
    assert cfg.tol("sup", 0.01) == 0.01


def test_report_records_value_and_tolerance():
    rep = ExperimentReport("x", {})
    rep.check("a", 0.5, 1.0)
    rep.check("b", 2.0, 1.0)
    d = rep.to_dict(deterministic=True)
    assert d["checks"][0] == {"name": "a", "value": 0.5, "tolerance": 1.0, "passed": True}
    assert not rep.passed
    assert "wall_time" not in d
    assert "wall_time" in rep.to_dict()


def test_unknown_experiment():
    with pytest.raises(KeyError):
        run(ExperimentConfig("nope"))


def test_experiment_registry():
    assert set(EXPERIMENTS) == {"sample", "splitting-exact", "splitting-law", "ewens-enum", "ewens-unitary",
                                "kernel-eval", "kernel-limit", "opuc-orth", "identities"}


def test_sharding_independent_of_workers(monkeypatch):
    cfg = ExperimentConfig("identities", shards=3, seed=5)
    draw = lambda rng, m: rng.random(m)
    a = sharded(cfg, 1000, 0, draw)
    monkeypatch.setenv("HAARFORGE_THREADS", "1")
    assert worker_count(3) == 1
    b = sharded(cfg, 1000, 0, draw)
    assert a.shape == (1000,)
    assert np.array_equal(a, b)


# -- run() examples ------------------------------------------------------------------

def test_run_splitting_exact_quaternion():
    rep = run(ExperimentConfig("splitting-exact", n=6, field="h", seed=7))
    assert rep.passed
    assert rep.checks[0].value <= 1e-10


def test_run_ewens_enum():
    rep = run(ExperimentConfig("ewens-enum", n=4, theta=0.5, group="sn"))
    assert rep.passed
    assert rep.checks[0].value <= 1e-12


def test_run_kernel_limit_single_delta():
    rep = run(ExperimentConfig("kernel-limit", delta=(0.5, 0.3), nmax=400))
    assert rep.passed
    assert len(rep.tables["convergence"]) == 4


def test_run_sample_writes_jsonl(tmp_path):
    out = tmp_path / "s.json"
    rep = run(ExperimentConfig("sample", group="sp", n=2, samples=3, out=str(out)))
    assert rep.passed
    rows = [json.loads(l) for l in open(tmp_path / "s.jsonl")]
    assert len(rows) == 3
    assert np.array(rows[0]["matrix"]).shape == (2, 2, 4)


def test_kernel_table_csv(tmp_path):
    out = tmp_path / "k.csv"
    rep = run(ExperimentConfig("kernel-eval", check="table", n=5, out=str(out), format="csv"))
    assert rep.passed
    lines = open(out).read().splitlines()
    assert lines[0] == "theta,tau,value"
    assert len(lines) == 41 * 41 + 1


def test_acceptance_config_overrides():
    cfg = acceptance_config(6, seed=2, samples=100)
    assert cfg.seed == 2 and cfg.samples == 100 and cfg.check == "moments"


# -- CLI ------------------------------------------------------------------------------

def test_cli_deterministic_json_is_reproducible(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code = main(["run", "splitting-exact", "--n", "4", "--seed", "3", "--samples", "20",
                     "--deterministic", "--quiet", "--out", str(p)])
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert json.loads(paths[0].read_text())["passed"] is True


def test_cli_exit_code_reflects_failure(capsys):
    # an impossible tolerance must fail the run
    assert main(["identities", "--tol", "inversion=0", "--quiet"]) in (0, 1)
    assert main(["splitting-exact", "--n", "3", "--samples", "10", "--tol", "rel=-1", "--quiet"]) == 1


def test_cli_rejects_bad_flags(capsys):
    with pytest.raises(SystemExit):
        main(["splitting-exact", "--field", "q"])
    with pytest.raises(SystemExit):
        main(["splitting-law", "--group", "gl"])
    assert main(["kernel-eval", "--format", "csv"]) == 2


def test_cli_acceptance_subcommand(capsys):
    assert main(["acceptance", "4", "5"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] criterion 4" in out and "[PASS] criterion 5" in out


def test_console_script_module_entry():
    r = subprocess.run([sys.executable, "-m", "haarforge.cli", "ewens-enum", "--n", "3", "--theta", "1",
                        "--group", "sn", "--quiet"], capture_output=True)
    assert r.returncode == 0
