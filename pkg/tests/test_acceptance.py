"""End-to-end convergence and oracle checks on the shipped configs.

These run full-size Monte Carlo batches and are excluded from the default
test run; use ``pytest -m slow``.
"""

import json
from dataclasses import replace

import pytest
from conftest import CONFIGS_DIR

from cdslab.cli import main
from cdslab.loader import parse_run_config
from cdslab.validation import fpt_probability, run_sweep, single_name, sweep_steps

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def benchmark_sweep():
    run = parse_run_config((CONFIGS_DIR / "benchmark.json").read_bytes())
    sim = replace(run.sim, workers=4)
    return run_sweep(run.model, run.contract, sweep_steps(run.sim.steps, 5), sim)


class TestSingleNameOracle:
    def test_default_probability_approaches_closed_form(self):
        run = parse_run_config((CONFIGS_DIR / "single_name.json").read_bytes())
        name = single_name(run.model, run.contract)
        closed = fpt_probability(name.v0, name.barrier, name.gamma, name.mu, name.sigma, name.maturity)

        sim = replace(run.sim, workers=4)
        report = run_sweep(run.model, run.contract, [128, 256, 512, 1024], sim)
        probs = [lvl.trigger_prob for lvl in report.levels]
        ses = [lvl.trigger_prob_se for lvl in report.levels]

        for (p, se), nxt in zip(zip(probs, ses), probs[1:]):
            assert nxt > p - 2 * se
        finest = probs[-1]
        assert finest < closed
        assert closed - finest < 0.015


class TestBenchmarkConvergence:
    def test_price_differences_shrink(self, benchmark_sweep):
        deltas = benchmark_sweep.deltas
        assert len(deltas) == 4
        assert benchmark_sweep.is_converging()
        last = benchmark_sweep.levels[-2]
        assert last.delta_c < max(3 * last.se_delta, 1e-3 * last.c_hat)

    def test_jump_statistic_decays(self, benchmark_sweep):
        jumps = [lvl.mean_jump for lvl in benchmark_sweep.levels]
        for coarse, fine in zip(jumps, jumps[1:]):
            assert fine < 0.8 * coarse

    def test_fourth_moment_bounded(self, benchmark_sweep):
        moments = [lvl.moment4 for lvl in benchmark_sweep.levels]
        assert all(m > 0 for m in moments)
        assert max(moments) < 2 * min(moments)
        assert all(lvl.faults == 0 for lvl in benchmark_sweep.levels)

    def test_simultaneous_defaults_vanish(self, benchmark_sweep):
        rates = [lvl.simultaneous_rate for lvl in benchmark_sweep.levels]
        for coarse, fine in zip(rates, rates[1:]):
            assert fine <= coarse
        assert rates[-1] < 0.01

    def test_premium_date_hits_decrease(self, benchmark_sweep):
        rates = [lvl.premium_hit_rate for lvl in benchmark_sweep.levels]
        assert rates[0] > 0
        for coarse, fine in zip(rates, rates[1:]):
            assert fine < coarse
        assert rates[-1] < rates[0] / 4


class TestNegativeControl:
    def test_perfectly_correlated_names_default_together(self):
        run = parse_run_config((CONFIGS_DIR / "negative_control.json").read_bytes())
        report = run_sweep(run.model, run.contract, [run.sim.steps], run.sim, unsafe=True)
        assert report.levels[0].simultaneous_rate > 0.5


class TestDeterminism:
    @pytest.mark.parametrize("workers", ["4", "16"])
    def test_price_json_identical_across_workers(self, tmp_path, workers):
        config = CONFIGS_DIR / "benchmark.json"
        base = ["price", "--config", str(config), "--paths", "20000"]
        assert main([*base, "--out", str(tmp_path / "w1"), "--workers", "1"]) == 0
        assert main([*base, "--out", str(tmp_path / "wn"), "--workers", workers]) == 0
        one = (tmp_path / "w1" / "price.json").read_bytes()
        many = (tmp_path / "wn" / "price.json").read_bytes()
        assert one == many
        assert json.loads(one)["n_paths"] == 20000
