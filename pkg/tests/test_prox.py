import math
import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
from scipy.special import xlogy

from src.core.errors import ArgumentError, CapabilityError, DomainError
from src.prox import (
    FeasibleSet,
    L1Composite,
    LinearModel,
    ProxSetup,
    bregman,
    minimax_prox_step,
    project_simplex,
    prox_step,
    three_point_gap,
)


class TestBregman(unittest.TestCase):
    def test_euclidean_examples(self):
        setup = ProxSetup.euclidean()
        self.assertEqual(bregman(setup, [1.0, 2.0], [1.0, 2.0]), 0.0)
        self.assertEqual(bregman(setup, [1.0, 0.0], [0.0, 0.0]), 0.5)

    def test_entropy_examples(self):
        setup = ProxSetup.entropy_simplex()
        self.assertAlmostEqual(bregman(setup, [0.5, 0.5], [0.5, 0.5]), 0.0, places=15)
        self.assertAlmostEqual(bregman(setup, [1.0, 0.0], [0.5, 0.5]), math.log(2.0), places=12)

    def test_entropy_domain(self):
        setup = ProxSetup.entropy_simplex()
        with self.assertRaises(DomainError):
            bregman(setup, [0.5, 0.5], [1.0, 0.0])
        with self.assertRaises(DomainError):
            setup.prox_grad([0.0, 1.0])

    def test_lower_bound_on_random_pairs(self):
        rng = np.random.default_rng(0)
        euclid = ProxSetup.euclidean()
        scaled = ProxSetup.scaled_euclidean(3.0)
        entropy = ProxSetup.entropy_simplex()
        for _ in range(1000):
            x, y = rng.normal(size=3), rng.normal(size=3)
            self.assertGreaterEqual(bregman(euclid, x, y) + 1e-12, 0.5 * euclid.norm(x - y) ** 2)
            self.assertGreaterEqual(bregman(scaled, x, y) + 1e-12, 0.5 * scaled.norm(x - y) ** 2)
            p, q = rng.dirichlet(np.ones(3)), rng.dirichlet(np.ones(3))
            self.assertGreaterEqual(bregman(entropy, p, q) + 1e-12, 0.5 * entropy.norm(p - q) ** 2)

    def test_dual_norms(self):
        self.assertEqual(ProxSetup.entropy_simplex().dual_norm([1.0, -3.0, 2.0]), 3.0)
        self.assertAlmostEqual(ProxSetup.scaled_euclidean(4.0).dual_norm([3.0, 4.0]), 2.5)


class TestFeasibleSet(unittest.TestCase):
    def test_simplex_projection(self):
        assert_allclose(project_simplex(np.array([0.7, 0.5, -0.2])), [0.6, 0.4, 0.0], atol=1e-15)
        x = project_simplex(np.array([5.0, 5.0]))
        assert_allclose(x, [0.5, 0.5])

    def test_contains_and_diameter(self):
        box = FeasibleSet.box([-1.0, -1.0], [1.0, 1.0])
        self.assertTrue(box.contains([1.0, -1.0]))
        self.assertFalse(box.contains([1.1, 0.0]))
        self.assertAlmostEqual(box.diameter(), 2.0 * math.sqrt(2.0))
        self.assertEqual(FeasibleSet.whole_space(2).diameter(), float("inf"))
        self.assertEqual(FeasibleSet.ball([0.0, 0.0], 2.0).diameter(), 4.0)

    def test_invalid_sets(self):
        with self.assertRaises(ArgumentError):
            FeasibleSet.box([1.0], [0.0])
        with self.assertRaises(ArgumentError):
            FeasibleSet.ball([0.0], 0.0)


class TestProxStep(unittest.TestCase):
    def test_closed_form_examples(self):
        x = prox_step(ProxSetup.euclidean(), FeasibleSet.whole_space(2), [0.0, 0.0], [1.0, 0.0], 1.0)
        assert_array_equal(x, [-1.0, 0.0])

        x = prox_step(
            ProxSetup.entropy_simplex(), FeasibleSet.simplex(2), [0.5, 0.5], [0.0, math.log(3.0)], 1.0
        )
        assert_allclose(x, [0.75, 0.25], atol=1e-15)

        box = FeasibleSet.box([0.0, 0.0], [1.0, 1.0])
        x = prox_step(ProxSetup.euclidean(), box, [0.5, 0.5], [1.0, 0.0], 1.0)
        assert_array_equal(x, [0.0, 0.5])

    def test_whole_space_matches_analytic_form_bitwise(self):
        rng = np.random.default_rng(1)
        setup = ProxSetup.euclidean()
        for _ in range(20):
            u, g = rng.normal(size=4), rng.normal(size=4)
            alpha = float(rng.uniform(0.1, 3.0))
            assert_array_equal(prox_step(setup, FeasibleSet.whole_space(4), u, g, alpha), u - alpha * g)

    def test_l1_soft_threshold(self):
        x = prox_step(
            ProxSetup.euclidean(), FeasibleSet.whole_space(2), [3.0, -0.5], [0.0, 0.0], 1.0, L1Composite(1.0)
        )
        assert_array_equal(x, [2.0, 0.0])

    def test_unsupported_combinations(self):
        with self.assertRaises(CapabilityError) as ctx:
            prox_step(ProxSetup.entropy_simplex(), FeasibleSet.box([0.0], [1.0]), [0.5], [1.0], 1.0)
        self.assertIn("supported", str(ctx.exception))
        with self.assertRaises(CapabilityError):
            prox_step(ProxSetup.euclidean(), FeasibleSet.simplex(2), [0.5, 0.5], [1.0, 0.0], 1.0, L1Composite(1.0))
        with self.assertRaises(ArgumentError):
            prox_step(ProxSetup.euclidean(), FeasibleSet.whole_space(1), [0.0], [1.0], 0.0)

    def test_matches_grid_search(self):
        rng = np.random.default_rng(2)
        setup = ProxSetup.euclidean()
        box = FeasibleSet.box([-1.0, -1.0], [1.0, 1.0])
        axis = np.linspace(-1.0, 1.0, 401)
        grid = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1).reshape(-1, 2)
        for _ in range(50):
            u = rng.uniform(-1.0, 1.0, size=2)
            g = rng.normal(scale=2.0, size=2)
            alpha = float(rng.uniform(0.1, 2.0))
            x = prox_step(setup, box, u, g, alpha)
            objective = 0.5 * np.sum((grid - u) ** 2, axis=1) + alpha * grid @ g
            best = grid[np.argmin(objective)]
            value = 0.5 * float(np.sum((x - u) ** 2)) + alpha * float(g @ x)
            self.assertLessEqual(value, float(np.min(objective)) + 1e-12)
            self.assertLessEqual(float(np.linalg.norm(x - best)), 2 * (axis[1] - axis[0]))

    def test_entropy_matches_simplex_grid(self):
        rng = np.random.default_rng(3)
        setup = ProxSetup.entropy_simplex()
        Q = FeasibleSet.simplex(3)
        n = 200
        i, j = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
        keep = i + j <= n
        grid = np.stack([i[keep], j[keep], n - i[keep] - j[keep]], axis=1) / n
        for _ in range(50):
            u = rng.dirichlet(np.ones(3))
            g = rng.normal(size=3)
            alpha = float(rng.uniform(0.1, 2.0))
            x = prox_step(setup, Q, u, g, alpha)
            values = np.sum(xlogy(grid, grid) - xlogy(grid, u) - grid + u, axis=1) + alpha * grid @ g
            value = bregman(setup, x, u) + alpha * float(g @ x)
            self.assertLessEqual(value, float(np.min(values)) + 1e-12)


class TestMinimaxProxStep(unittest.TestCase):
    def test_single_component_is_prox_step(self):
        setup = ProxSetup.euclidean()
        Q = FeasibleSet.box([-1.0, -1.0], [1.0, 1.0])
        model = LinearModel(np.zeros(2), [0.3], [[0.4, -2.0]])
        assert_array_equal(
            minimax_prox_step(setup, Q, [0.2, 0.1], model, 0.5),
            prox_step(setup, Q, [0.2, 0.1], [0.4, -2.0], 0.5),
        )

    def test_one_dimensional_examples(self):
        setup = ProxSetup.euclidean()
        Q = FeasibleSet.whole_space(1)
        symmetric = LinearModel([0.0], [0.0, 0.0], [[1.0], [-1.0]])
        assert_allclose(minimax_prox_step(setup, Q, [0.0], symmetric, 1.0), [0.0], atol=1e-9)

        shifted = LinearModel([0.0], [0.0, -1.0], [[1.0], [-1.0]])
        x = minimax_prox_step(setup, Q, [0.0], shifted, 1.0)
        grid = np.linspace(-2.0, 2.0, 400001)
        objective = 0.5 * grid ** 2 + np.maximum(grid, -1.0 - grid)
        self.assertAlmostEqual(float(x[0]), float(grid[np.argmin(objective)]), delta=1e-6)
        self.assertAlmostEqual(float(x[0]), -0.5, delta=1e-6)

    def test_kink_of_max_of_quadratics(self):
        # linearizations of (x-1)^2 and (x+1)^2 at 0 give 1 + 2|x|
        model = LinearModel([0.0], [1.0, 1.0], [[-2.0], [2.0]])
        x = minimax_prox_step(ProxSetup.euclidean(), FeasibleSet.whole_space(1), [0.5], model, 0.1)
        self.assertAlmostEqual(float(x[0]), 0.3, places=8)

    def test_matches_grid_search(self):
        rng = np.random.default_rng(4)
        setup = ProxSetup.euclidean()
        box = FeasibleSet.box([-1.0, -1.0], [1.0, 1.0])
        axis = np.linspace(-1.0, 1.0, 401)
        grid = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1).reshape(-1, 2)
        for _ in range(50):
            y = rng.uniform(-1.0, 1.0, size=2)
            model = LinearModel(y, rng.normal(size=3), rng.normal(scale=2.0, size=(3, 2)))
            u = rng.uniform(-1.0, 1.0, size=2)
            alpha = float(rng.uniform(0.1, 2.0))
            x = minimax_prox_step(setup, box, u, model, alpha)
            lines = model.offsets[None, :] + grid @ model.gradients.T
            objective = 0.5 * np.sum((grid - u) ** 2, axis=1) + alpha * np.max(lines, axis=1)
            value = 0.5 * float(np.sum((x - u) ** 2)) + alpha * model.max_value(x)
            self.assertLessEqual(value, float(np.min(objective)) + 1e-8)


class TestThreePointInequality(unittest.TestCase):
    def _check(self, setup, Q, step):
        rng = np.random.default_rng(5)
        for _ in range(20):
            z = Q.sample(rng, 1)[0]
            y, psi = step(rng, z)
            for x in Q.sample(rng, 100):
                self.assertGreaterEqual(three_point_gap(setup, psi, x, y, z), -1e-8)

    def test_prox_step_euclidean_box(self):
        setup = ProxSetup.euclidean()
        Q = FeasibleSet.box([-1.0, -2.0, 0.0], [1.0, 0.0, 3.0])

        def step(rng, z):
            g, alpha = rng.normal(size=3), float(rng.uniform(0.1, 2.0))
            return prox_step(setup, Q, z, g, alpha), lambda x: alpha * float(g @ x)

        self._check(setup, Q, step)

    def test_prox_step_entropy_simplex(self):
        setup = ProxSetup.entropy_simplex()
        Q = FeasibleSet.simplex(4)

        def step(rng, z):
            g, alpha = rng.normal(size=4), float(rng.uniform(0.1, 2.0))
            return prox_step(setup, Q, z, g, alpha), lambda x: alpha * float(g @ x)

        self._check(setup, Q, step)

    def test_minimax_prox_step_ball(self):
        setup = ProxSetup.euclidean()
        Q = FeasibleSet.ball([0.0, 0.0, 0.0], 1.5)

        def step(rng, z):
            model = LinearModel(z, rng.normal(size=3), rng.normal(size=(3, 3)))
            alpha = float(rng.uniform(0.1, 2.0))
            y = minimax_prox_step(setup, Q, z, model, alpha)
            return y, lambda x: alpha * model.max_value(x)

        self._check(setup, Q, step)


if __name__ == "__main__":
    unittest.main()
