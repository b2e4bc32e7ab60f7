import numpy as np
import pytest

from srlab.distopt import (
    MopConfig,
    Preset,
    PsoConfig,
    bias_of_p,
    objective,
    optimize_table,
    preset_config,
    pso_minimize,
    variance_of_p,
)
from srlab.streams import RandomStream


from oracles import equal_weight_root


def scan_objective_min(cfg, f, points=10**6):
    """Independent brute-force oracle: dense scan of the scalarized objective."""
    p = np.linspace(0.0, 1.0, points)
    v = (cfg.delta**2) * (p - p * p)
    b = cfg.delta * ((1.0 - p) - f)
    total = cfg.theta1 * v * v + cfg.theta2 * b * b
    if cfg.v_max is not None:
        total = total + cfg.k1 * (v >= cfg.v_max)
    if cfg.b_max is not None:
        total = total + cfg.k2 * (np.abs(b) >= cfg.b_max)
    return total.min()


class TestConfigs:
    def test_preset_values(self):
        assert preset_config(Preset.BIAS_MIN) == MopConfig(theta1=0.0, theta2=1.0)
        assert preset_config(Preset.VAR_MIN_FLOOR) == MopConfig(theta1=1.0, theta2=0.0)
        assert preset_config(Preset.VAR_MIN_CEIL) == MopConfig(theta1=1.0, theta2=0.0)
        assert preset_config(Preset.NEAREST_LIKE) == MopConfig(theta1=0.98, theta2=0.02)
        assert preset_config(Preset.D1) == MopConfig(theta1=0.5, theta2=0.5)
        d2 = preset_config(Preset.D2)
        assert (d2.theta1, d2.theta2, d2.b_max, d2.k2) == (0.5, 0.5, 0.05, 1e10)
        assert d2.v_max is None and d2.k1 == 0.0

    def test_weight_validation(self):
        with pytest.raises(ValueError):
            MopConfig(theta1=0.6, theta2=0.6)
        with pytest.raises(ValueError):
            MopConfig(theta1=-0.1, theta2=1.1)

    def test_penalty_limit_coupling(self):
        with pytest.raises(ValueError):
            MopConfig(theta1=0.5, theta2=0.5, k2=1e10)  # penalty without limit
        with pytest.raises(ValueError):
            MopConfig(theta1=0.5, theta2=0.5, b_max=0.05)  # limit without penalty

    def test_pso_validation(self):
        with pytest.raises(ValueError):
            PsoConfig(swarm_size=1)


class TestObjectivePieces:
    def test_variance_endpoints(self):
        assert variance_of_p(0.0) == 0.0
        assert variance_of_p(1.0) == 0.0

    def test_variance_values(self):
        assert variance_of_p(0.5) == 0.25
        assert np.isclose(variance_of_p(0.1), 0.09)
        p = RandomStream(0).uniform(100)
        assert np.allclose(variance_of_p(p), variance_of_p(1.0 - p))

    def test_variance_scales_with_step(self):
        assert np.isclose(variance_of_p(0.5, delta=0.1), 0.25 * 0.01, rtol=1e-15)

    def test_bias_zero_at_matching_p(self):
        f = RandomStream(1).uniform(50)
        assert np.allclose(bias_of_p(1.0 - f, f), 0.0)
        assert bias_of_p(1.0, 0.0) == 0.0

    def test_bias_value(self):
        assert np.isclose(bias_of_p(0.15, 0.8), 0.05)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            variance_of_p(1.5)
        with pytest.raises(ValueError):
            bias_of_p(0.5, 1.5)

    def test_objective_examples(self):
        bias_min = preset_config(Preset.BIAS_MIN)
        assert objective(0.75, 0.25, bias_min) == 0.0  # dyadic: bias exactly zero
        assert objective(0.7, 0.3, bias_min) < 1e-30
        var_min = preset_config(Preset.VAR_MIN_FLOOR)
        assert objective(0.0, 0.3, var_min) == 0.0
        d1 = preset_config(Preset.D1)
        assert objective(0.5, 0.5, d1) == 0.5 * 0.25**2

    def test_objective_clamps(self):
        d1 = preset_config(Preset.D1)
        assert objective(1.7, 0.5, d1) == objective(1.0, 0.5, d1)

    def test_penalty_fires_on_closed_boundary(self):
        # dyadic values so the bias hits the cap exactly
        cfg = MopConfig(theta1=0.5, theta2=0.5, b_max=0.0625, k2=1e10)
        assert objective(0.5, 0.4375, cfg) > 1e9  # bias == cap: penalized
        assert objective(0.5, 0.45, cfg) < 1.0  # strictly inside
        d2 = preset_config(Preset.D2)
        assert objective(0.1, 0.8, d2) > 1e9  # bias 0.1 >= 0.05
        assert objective(0.2, 0.8, d2) < 1.0


class TestPsoMinimize:
    def test_convex_quadratic(self):
        p, val = pso_minimize(lambda q: (q - 0.3) ** 2, PsoConfig(seed=1))
        assert abs(p - 0.3) < 1e-6
        assert val < 1e-12

    def test_penalty_plateau(self):
        def fitness(q):
            q = np.asarray(q)
            return np.where((q < 0.05) | (q > 0.15), 1e10, 0.0) + (q - 0.054) ** 2

        p, _ = pso_minimize(fitness, PsoConfig(seed=2))
        assert 0.05 <= p <= 0.15

    def test_recovers_proximity_probability(self):
        cfg = preset_config(Preset.BIAS_MIN)
        p, _ = pso_minimize(lambda q: objective(q, 0.3, cfg), PsoConfig(seed=3))
        assert abs(p - 0.7) < 1e-4

    def test_deterministic_given_seed(self):
        f = lambda q: (q - 0.42) ** 2
        assert pso_minimize(f, PsoConfig(seed=9)) == pso_minimize(f, PsoConfig(seed=9))

    def test_result_stays_in_bounds(self):
        p, _ = pso_minimize(lambda q: -q, PsoConfig(seed=4))
        assert 0.0 <= p <= 1.0
        assert abs(p - 1.0) < 1e-9


class TestOptimizeTable:
    def test_bias_min_matches_proximity_rule(self):
        table = optimize_table(Preset.BIAS_MIN, grid_size=101)
        assert np.max(np.abs(table.p - (1.0 - table.grid))) < 1e-3

    def test_var_min_endpoints_pinned(self):
        floor_t = optimize_table(Preset.VAR_MIN_FLOOR, grid_size=21)
        ceil_t = optimize_table(Preset.VAR_MIN_CEIL, grid_size=21)
        assert np.all(floor_t.p == 1.0)
        assert np.all(ceil_t.p == 0.0)
        assert floor_t.label == "var-min-floor"

    def test_matches_brute_force_scan(self):
        pso = PsoConfig()
        for preset in Preset:
            cfg = preset_config(preset)
            table = optimize_table(preset, grid_size=21, pso=pso)
            for j, f in enumerate(table.grid):
                got = objective(table.p[j], f, cfg)
                assert got <= scan_objective_min(cfg, f) + 1e-8

    def test_equal_weight_root_oracle(self, d1_table):
        for f in (0.2, 0.35, 0.5, 0.65, 0.9):
            j = int(round(f * (d1_table.grid.size - 1)))
            assert abs(d1_table.p[j] - equal_weight_root(f)) < 1e-3
        j_half = (d1_table.grid.size - 1) // 2
        assert abs(d1_table.p[j_half] - 0.5) < 1e-3

    def test_equal_weight_symmetry(self, d1_table):
        p = d1_table.p
        assert np.max(np.abs(p + p[::-1] - 1.0)) < 2e-3

    def test_equal_weight_variance_never_above_proximity_rule(self, d1_table):
        v_opt = variance_of_p(d1_table.p)
        v_sr = variance_of_p(1.0 - d1_table.grid)
        assert np.all(v_opt <= v_sr + 1e-12)

    def test_capped_bias_at_node(self, d2_table):
        j = int(round(0.8 * (d2_table.grid.size - 1)))
        assert abs(d2_table.p[j] - 0.15) < 1e-2
        assert abs(abs(bias_of_p(d2_table.p[j], 0.8)) - 0.05) < 1e-3

    def test_capped_bias_feasible_everywhere(self, d2_table):
        bias = np.abs(bias_of_p(d2_table.p, d2_table.grid))
        assert bias.max() <= 0.05 + 1e-3

    def test_threshold_shape(self, tables_1001):
        table = tables_1001[Preset.NEAREST_LIKE]
        f = table.grid
        assert np.all(table.p[f < 0.45] >= 0.99)
        assert np.all(table.p[f > 0.55] <= 0.01)

    def test_thread_count_does_not_change_result(self):
        a = optimize_table(Preset.D1, grid_size=51, threads=1)
        b = optimize_table(Preset.D1, grid_size=51, threads=3)
        assert np.array_equal(a.p, b.p)

    def test_nodes_match_scalar_solver(self, d1_table):
        cfg = preset_config(Preset.D1)
        pso = PsoConfig()
        for j in (0, 250, 777):
            stream = RandomStream(pso.seed).substream(j)
            p, _ = pso_minimize(lambda q: objective(q, d1_table.grid[j], cfg), pso, stream=stream)
            assert p == d1_table.p[j]

    def test_custom_config_label(self):
        cfg = MopConfig(theta1=0.25, theta2=0.75)
        table = optimize_table(cfg, grid_size=11)
        assert table.label == "custom"
        with pytest.raises(TypeError):
            optimize_table("d1", grid_size=11)
