"""Snapshot tests for artifact layout stability.

Run with: pytest tests/snapshots/ -v
Update with: pytest tests/snapshots/ --snapshot-update

price.json is pinned on the benchmark config at a small path count and its
fixed seed. Monte Carlo figures move with numpy's Philox stream, so only the
deterministic fields and the key set are frozen; the figures are checked for
shape and sign.
"""

import json

from conftest import CONFIGS_DIR

from cdslab.cli import main

BENCHMARK = CONFIGS_DIR / "benchmark.json"
FIXED_FIELDS = ("fingerprint", "seed", "seniority", "n_steps", "h", "n_paths", "faults")


def price_benchmark(out_dir) -> dict:
    rc = main(["price", "--config", str(BENCHMARK), "--out", str(out_dir), "--paths", "2000", "--steps", "16"])
    assert rc == 0
    return json.loads((out_dir / "price.json").read_text())


class TestPriceJson:
    def test_fixed_fields(self, tmp_path, snapshot):
        data = price_benchmark(tmp_path / "out")
        assert {key: data[key] for key in FIXED_FIELDS} == snapshot

    def test_keys(self, tmp_path, snapshot):
        data = price_benchmark(tmp_path / "out")
        assert sorted(data) == snapshot

    def test_figures_are_finite_and_positive(self, tmp_path):
        data = price_benchmark(tmp_path / "out")
        assert 0.0 < data["c_hat"] < 1.0
        assert data["se_c"] > 0.0
        assert data["mean_f2"] > 0.0


class TestCsvHeaders:
    def test_price(self, tmp_path, snapshot):
        price_benchmark(tmp_path / "out")
        header = (tmp_path / "out" / "price.csv").read_text().splitlines()[0]
        assert header == snapshot

    def test_sweep(self, tmp_path, snapshot):
        out = tmp_path / "out"
        args = ["sweep", "--config", str(BENCHMARK), "--out", str(out), "--levels", "1", "--paths", "256", "--steps", "8"]
        assert main(args) == 0
        header = (out / "sweep.csv").read_text().splitlines()[0]
        assert header == snapshot

    def test_tangency(self, tmp_path, snapshot):
        out = tmp_path / "out"
        assert main(["tangency", "--n-max", "10", "--out", str(out)]) == 0
        header = (out / "tangency.csv").read_text().splitlines()[0]
        assert header == snapshot
