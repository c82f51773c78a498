"""Tests for the Euler engine, random substreams and batch determinism."""

import math

import numpy as np
import pytest
from conftest import make_contract, make_model, make_sim

from cdslab.domain import TimeGrid
from cdslab.dynamics import chol_factor
from cdslab.engine import (
    chunk_normals,
    coupling_factors,
    euler_step,
    level_normals,
    noise_dim,
    read_path_dump,
    simulate_batch,
    simulate_chunk,
    simulate_coupled_batch,
    simulate_path,
    substream,
    write_path_dump,
)
from cdslab.pricer import LegFold


class StepFold:
    """Collects default steps and terminal values of every level, in path order."""

    def fold_chunk(self, chunks):
        return [(c.default_step.copy(), c.maturity_values.copy()) for c in chunks]

    def merge(self, left, right):
        return [
            (np.concatenate([a[0], b[0]]), np.concatenate([a[1], b[1]]))
            for a, b in zip(left, right)
        ]


class TestSubstreams:
    def test_same_key_same_draws(self):
        a = substream(5, 3).normals(4, 2)
        b = substream(5, 3).normals(4, 2)
        assert np.array_equal(a, b)

    def test_distinct_paths_differ(self):
        assert not np.array_equal(substream(5, 3).normals(4, 2), substream(5, 4).normals(4, 2))

    def test_distinct_seeds_differ(self):
        assert not np.array_equal(substream(5, 3).normals(4, 2), substream(6, 3).normals(4, 2))

    def test_prefix_stable(self):
        short = substream(9, 0).normals(3, 3)
        long = substream(9, 0).normals(10, 3)
        assert np.array_equal(short, long[:3])

    def test_chunk_normals_match_substreams(self):
        block = chunk_normals(2, 10, 13, 5, 3)
        assert block.shape == (3, 5, 3)
        for offset, p in enumerate(range(10, 13)):
            assert np.array_equal(block[offset], substream(2, p).normals(5, 3))


class TestEulerStep:
    def test_zero_coefficients(self):
        out = euler_step([100.0], [0.0], [[0.0]], [1.7], 0.01)
        assert out.tolist() == [100.0]

    def test_single_name(self):
        out = euler_step([100.0], [0.05], [[0.2]], [1.0], 0.01)
        assert out[0] == pytest.approx(102.05, abs=1e-12)

    def test_two_names(self):
        out = euler_step([50.0, 80.0], [0.0, 0.0], np.diag([0.3, 0.4]), [-1.0, 2.0], 0.04)
        assert out == pytest.approx([47.0, 92.8], abs=1e-12)

    def test_batched_rows_match_single_rows(self):
        from cdslab.dynamics import instantaneous_sigma

        model = make_model(base_vol=(0.2, 0.3, 0.4), jump_coeff=0.5, correlation=[[1, 0, 0], [0, 1, 0.5], [0, 0.5, 1]])
        factor = chol_factor(model.correlation)
        v = np.array([[100.0, 90.0, 80.0], [110.0, 70.0, 95.0], [99.0, 101.0, 60.0]])
        alpha = np.array([0, 1, 2])
        z = substream(5, 0).normals(3, 3)
        batch = euler_step(v, model.drift_at(0.0), instantaneous_sigma(model, alpha, factor), z, 0.01)
        for i in range(3):
            row = euler_step(v[i], model.drift_at(0.0), instantaneous_sigma(model, int(alpha[i]), factor), z[i], 0.01)
            assert np.array_equal(batch[i], row)

    def test_extra_draws_ignored(self):
        out = euler_step([100.0, 50.0], [0.0, 0.0], np.eye(2), [1.0, -1.0, 99.0], 0.25)
        assert out.tolist() == [150.0, 25.0]


class TestSimulatePath:
    def test_grid_covers_horizon(self):
        contract = make_contract(maturity=1.0)
        path = simulate_path(make_model(), contract, make_sim(steps=8), substream(1, 0))
        assert path.n_steps == 16
        assert path.h == pytest.approx(0.125)
        assert path.values[0].tolist() == [100.0, 100.0, 100.0]

    def test_zero_barriers_never_default(self):
        contract = make_contract(barriers=(0.0, 0.0, 0.0))
        path = simulate_path(make_model(base_vol=0.5), contract, make_sim(steps=16), substream(3, 7))
        assert path.default_step == (None, None, None)
        assert not path.alpha_path.any()

    def test_breach_at_inception(self):
        contract = make_contract(barriers=(0.0, 120.0, 0.0))
        path = simulate_path(make_model(), contract, make_sim(), substream(1, 0))
        assert path.default_step[1] == 0
        assert path.alpha_path[0] == 1

    def test_alpha_nondecreasing(self):
        contract = make_contract(barriers=(90.0, 95.0, 95.0))
        for p in range(20):
            path = simulate_path(make_model(base_vol=0.6, jump_coeff=0.5), contract, make_sim(steps=32), substream(4, p))
            assert np.all(np.diff(path.alpha_path) >= 0)

    def test_default_step_is_first_breach(self):
        contract = make_contract(barriers=(0.0, 97.0, 97.0))
        model = make_model(base_vol=0.5)
        for p in range(20):
            path = simulate_path(model, contract, make_sim(steps=32), substream(8, p))
            for i in (1, 2):
                below = np.flatnonzero(path.values[:, i] <= 97.0)
                expected = int(below[0]) if below.size else None
                assert path.default_step[i] == expected

    def test_default_steps_match_hitting_time_on_growing_barrier(self):
        from cdslab.domain import Barrier
        from cdslab.pathops import hitting_time

        barrier = Barrier(level=90.0, growth=0.08)
        contract = make_contract(barriers=(0.0, barrier, barrier))
        model = make_model(base_vol=0.3)
        sim = make_sim(steps=32)
        grid = TimeGrid(contract.maturity, sim.steps)
        defaults = 0
        for p in range(30):
            path = simulate_path(model, contract, sim, substream(21, p))
            for i in (1, 2):
                tau = hitting_time(path.values[:, i], barrier, path.times, grid.horizon)
                step = path.default_step[i]
                assert tau == (grid.horizon if step is None else step * path.h)
                defaults += step is not None
        assert defaults > 0

    def test_stochastic_rate_adds_noise_dimension(self):
        from cdslab.domain import DiscountRule

        rate = DiscountRule(mode="vasicek-component", speed=0.5, level=0.03, vol=0.01, r0=0.03)
        contract = make_contract(rate=rate)
        assert noise_dim(make_model(), contract) == 4
        path = simulate_path(make_model(), contract, make_sim(), substream(1, 0))
        assert path.rate_path is not None
        assert path.rate_path.shape == (path.n_steps + 1,)
        assert path.rate_path[0] == 0.03


class TestNonanticipativity:
    def test_prefix_depends_only_on_prefix_normals(self):
        model = make_model(base_vol=0.4, jump_coeff=0.5)
        contract = make_contract(barriers=(90.0, 95.0, 95.0))
        grid = TimeGrid(contract.maturity, 8)
        factor = chol_factor(model.correlation)
        z = chunk_normals(11, 0, 4, grid.n_steps, 3)
        perturbed = z.copy()
        perturbed[:, 5:] = -perturbed[:, 5:] * 3.0
        a = simulate_chunk(model, contract, grid, z, factor=factor, retain=True)
        b = simulate_chunk(model, contract, grid, perturbed, factor=factor, retain=True)
        assert np.array_equal(a.values[:, :6], b.values[:, :6])
        assert not np.array_equal(a.values[:, 7:], b.values[:, 7:])

    def test_replay_with_sigma_from_past_values(self):
        from cdslab.dynamics import instantaneous_sigma
        from cdslab.pathops import first_hit_index

        model = make_model(base_vol=(0.3, 0.5, 0.5), jump_coeff=0.8, correlation=[[1, 0, 0], [0, 1, 0.4], [0, 0.4, 1]])
        contract = make_contract(barriers=(85.0, 95.0, 95.0))
        sim = make_sim(steps=20)
        grid = TimeGrid(contract.maturity, sim.steps)
        levels = contract.barrier_levels(grid.times)
        factor = chol_factor(model.correlation)
        contagious_steps = 0
        for p in range(10):
            path = simulate_path(model, contract, sim, substream(11, p))
            z = substream(11, p).normals(grid.n_steps, noise_dim(model, contract))
            for n in range(grid.n_steps):
                hits = first_hit_index(path.values[: n + 1, 1:].T, levels[: n + 1, 1:].T)
                alpha = int(np.count_nonzero(hits >= 0))
                sigma = instantaneous_sigma(model, alpha, factor)
                replayed = euler_step(path.values[n], model.drift_at(grid.times[n]), sigma, z[n], grid.h)
                assert np.array_equal(replayed, path.values[n + 1])
                contagious_steps += alpha > 0
        assert contagious_steps > 0


class TestBatch:
    def test_single_path_matches_simulate_path(self):
        model = make_model(base_vol=0.5, jump_coeff=0.5)
        contract = make_contract(barriers=(90.0, 95.0, 95.0))
        sim = make_sim(steps=8, paths=1)
        result = simulate_batch(model, contract, sim, StepFold())
        path = simulate_path(model, contract, sim, substream(sim.seed, 0))
        steps, terminal = result.value[0]
        assert tuple(-1 if s is None else s for s in path.default_step) == tuple(steps[0])
        assert np.array_equal(terminal[0], path.values[8])

    def test_chunk_size_does_not_change_paths(self):
        model, contract = make_model(base_vol=0.4), make_contract(barriers=(90.0, 95.0, 95.0))
        a = simulate_batch(model, contract, make_sim(paths=100, chunk_size=7), StepFold())
        b = simulate_batch(model, contract, make_sim(paths=100, chunk_size=100), StepFold())
        assert np.array_equal(a.value[0][0], b.value[0][0])
        assert np.array_equal(a.value[0][1], b.value[0][1])
        assert a.n_chunks == 15

    def test_workers_do_not_change_result(self):
        model = make_model(base_vol=0.4, jump_coeff=0.3)
        contract = make_contract(barriers=(90.0, 95.0, 95.0))
        fold = LegFold(contract)
        serial = simulate_batch(model, contract, make_sim(paths=256, chunk_size=32, workers=1), fold)
        parallel = simulate_batch(model, contract, make_sim(paths=256, chunk_size=32, workers=2), fold)
        assert serial.value.n == parallel.value.n
        assert np.array_equal(serial.value.total, parallel.value.total)
        assert np.array_equal(serial.value.outer, parallel.value.outer)

    def test_fault_free_batch_is_valid(self):
        result = simulate_batch(make_model(), make_contract(), make_sim(paths=64), StepFold())
        assert result.faults == 0
        assert result.valid
        assert result.fault_rate == 0.0

    def test_huge_volatility_faults(self):
        model = make_model(base_vol=1e150)
        result = simulate_batch(model, make_contract(barriers=(0.0, 0.0, 0.0)), make_sim(paths=16), StepFold())
        assert result.faults > 0
        assert not result.valid

    @pytest.mark.slow
    def test_discounted_terminal_value_is_martingale(self):
        r, t = 0.03, 1.0
        model = make_model(drift=r, base_vol=0.2)
        contract = make_contract(barriers=(0.0, 0.0, 0.0), maturity=t)
        result = simulate_batch(model, contract, make_sim(steps=16, paths=20000, chunk_size=1000), StepFold())
        terminal = result.value[0][1][:, 0]
        mean = terminal.mean()
        se = terminal.std(ddof=1) / math.sqrt(terminal.size)
        assert abs(mean - 100.0 * math.exp(r * t)) < 4 * se


class TestCoupling:
    def test_coupling_factors(self):
        assert coupling_factors([4, 8, 16]) == [4, 2, 1]
        assert coupling_factors([8, 8]) == [1, 1]

    def test_coupling_rejects_non_dyadic(self):
        with pytest.raises(ValueError, match="halving"):
            coupling_factors([4, 12])

    def test_level_normals_unit_variance_sums(self):
        fine = np.arange(16, dtype=float).reshape(1, 8, 2)
        coarse = level_normals(fine, 2, 4)
        assert coarse.shape == (1, 4, 2)
        assert np.allclose(coarse[0, 0], (fine[0, 0] + fine[0, 1]) / math.sqrt(2))

    def test_finest_level_equals_standalone_run(self):
        model = make_model(base_vol=0.4, jump_coeff=0.5)
        contract = make_contract(barriers=(90.0, 95.0, 95.0))
        sim = make_sim(steps=16, paths=64)
        coupled = simulate_coupled_batch(model, contract, sim, [4, 8, 16], StepFold())
        alone = simulate_batch(model, contract, sim, StepFold())
        assert np.array_equal(coupled.value[2][0], alone.value[0][0])
        assert np.array_equal(coupled.value[2][1], alone.value[0][1])

    def test_repeated_levels_identical(self):
        model, contract = make_model(base_vol=0.4), make_contract(barriers=(90.0, 95.0, 95.0))
        result = simulate_coupled_batch(model, contract, make_sim(paths=64), [8, 8], StepFold())
        assert np.array_equal(result.value[0][0], result.value[1][0])
        assert np.array_equal(result.value[0][1], result.value[1][1])


class TestPathDump:
    def test_write_then_read(self, tmp_path):
        model, contract = make_model(), make_contract()
        paths = [simulate_path(model, contract, make_sim(), substream(1, p)) for p in range(3)]
        dump = tmp_path / "paths.bin"
        assert write_path_dump(dump, paths) == 3
        loaded = read_path_dump(dump)
        assert len(loaded) == 3
        for (h, values), path in zip(loaded, paths):
            assert h == path.h
            assert np.array_equal(values, path.values)

    def test_file_size(self, tmp_path):
        path = simulate_path(make_model(), make_contract(), make_sim(steps=4), substream(1, 0))
        dump = tmp_path / "one.bin"
        write_path_dump(dump, [path])
        assert dump.stat().st_size == 8 + 8 + 8 + 8 * (path.n_steps + 1) * 3
