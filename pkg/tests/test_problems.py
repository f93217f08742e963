import math
import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from src.core.errors import ArgumentError, CapabilityError
from src.problems import (
    SUITE,
    LogSumExpProblem,
    MinimaxProblem,
    QuadraticFunction,
    QuadraticProblem,
    get_problem,
    list_problems,
    reference_optimum,
    stationarity_residual,
)
from src.problems.base import Problem
from src.problems.registry import _scipy_warm_start
from src.prox.composite import AffineComposite
from src.prox.feasible import FeasibleSet


def smooth_parts(problem):
    if isinstance(problem, MinimaxProblem):
        return list(problem.components)
    return [problem.f]


def central_difference(f, x, h=1e-6):
    grad = np.zeros_like(x)
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        grad[i] = (f.value(x + step) - f.value(x - step)) / (2 * h)
    return grad


class TestSuite(unittest.TestCase):
    def test_registry(self):
        self.assertEqual(list_problems(), sorted(SUITE))
        for name in list_problems():
            problem = get_problem(name)
            self.assertEqual(problem.name, name)
            self.assertTrue(problem.has_optimum, name)
            self.assertTrue(problem.feasible.contains(problem.x0), name)
            self.assertEqual(isinstance(problem, MinimaxProblem), SUITE[name].minimax)
        with self.assertRaises(CapabilityError):
            get_problem("no_such_problem")

    def test_gradients_match_finite_differences(self):
        rng = np.random.default_rng(0)
        for name in list_problems():
            problem = get_problem(name)
            for f in smooth_parts(problem):
                for x in rng.normal(size=(20, problem.dimension)):
                    assert_allclose(f.gradient(x), central_difference(f, x), rtol=1e-5, atol=1e-6, err_msg=name)

    def test_lipschitz_constants(self):
        rng = np.random.default_rng(1)
        for name in list_problems():
            problem = get_problem(name)
            for f in smooth_parts(problem):
                for x, y in rng.normal(scale=2.0, size=(500, 2, problem.dimension)):
                    d = x - y
                    bound = f.value(y) + float(f.gradient(y) @ d) + 0.5 * problem.L * float(d @ d)
                    self.assertLessEqual(f.value(x), bound + 1e-10, name)
                    self.assertGreaterEqual(f.value(x), f.value(y) + float(f.gradient(y) @ d) - 1e-10, name)

    def test_registered_optima_are_stationary(self):
        for name in ("quad_well", "quad_ill", "quad_box", "logsumexp", "simplex_quad"):
            problem = get_problem(name)
            self.assertLessEqual(stationarity_residual(problem, problem.x_star), 1e-10, name)
            self.assertAlmostEqual(problem.composite_value(problem.x_star), problem.f_star, places=12)
        minimax = get_problem("maxquad_2d")
        self.assertLessEqual(stationarity_residual(minimax, minimax.x_star), 1e-6)
        self.assertEqual(minimax.composite_value(minimax.x_star), minimax.f_star)

    def test_known_values(self):
        assert_allclose(get_problem("quad_well").x_star, [2.0 / 2.75, -2.5 / 2.75], rtol=1e-12)
        logsumexp = get_problem("logsumexp")
        self.assertEqual(logsumexp.L, 2.0)
        self.assertAlmostEqual(logsumexp.f_star, 0.5 * math.log(6.0))
        assert_allclose(get_problem("simplex_quad").x_star, [0.6, 0.4, 0.0], atol=1e-15)
        assert_array_equal(get_problem("quad_box").x_star, [1.0, -0.5])
        self.assertEqual(get_problem("maxquad_sym").value([0.0]), 1.0)


class TestReferenceOptimum(unittest.TestCase):
    def test_analytic_optimum_is_returned(self):
        problem = get_problem("quad_well")
        x, f = reference_optimum(problem)
        assert_array_equal(x, problem.x_star)
        self.assertEqual(f, problem.f_star)
        x[0] = 99.0
        self.assertNotEqual(problem.x_star[0], 99.0)

    def test_non_diagonal_box_quadratic(self):
        problem = QuadraticProblem([[2.0, 0.5], [0.5, 1.0]], [3.0, 3.0],
                                   feasible=FeasibleSet.box([-1.0, -1.0], [1.0, 1.0]))
        self.assertFalse(problem.has_optimum)
        x, f = reference_optimum(problem)
        assert_allclose(x, [1.0, 1.0], atol=1e-9)
        self.assertAlmostEqual(f, -4.0, places=8)
        self.assertLessEqual(stationarity_residual(problem, x), 1e-10)

    def test_affine_term_enters_the_warm_start_gradient(self):
        # same optimum as the box quadratic above, with b moved into h = <c, x>
        problem = QuadraticProblem([[2.0, 0.5], [0.5, 1.0]], [0.0, 0.0],
                                   feasible=FeasibleSet.box([-1.0, -1.0], [1.0, 1.0]),
                                   h=AffineComposite([-3.0, -3.0]))
        self.assertFalse(problem.has_optimum)
        assert_allclose(_scipy_warm_start(problem), [1.0, 1.0], atol=1e-6)
        x, f = reference_optimum(problem)
        self.assertAlmostEqual(f, -4.0, places=8)
        self.assertLessEqual(stationarity_residual(problem, x), 1e-10)

    def test_unregistered_logsumexp(self):
        problem = LogSumExpProblem([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]], sigma=1.0, x0=[1.0, 2.0])
        self.assertFalse(problem.has_optimum)
        x, f = reference_optimum(problem)
        assert_allclose(x, [0.0, 0.0], atol=1e-9)
        self.assertAlmostEqual(f, math.log(3.0), places=12)


class TestValidation(unittest.TestCase):
    def test_quadratic_function(self):
        with self.assertRaises(ArgumentError):
            QuadraticFunction([[1.0, 2.0], [0.0, 1.0]], [0.0, 0.0])
        with self.assertRaises(ArgumentError):
            QuadraticFunction([[1.0, 0.0], [0.0, -1.0]], [0.0, 0.0])
        with self.assertRaises(ArgumentError):
            QuadraticFunction([[1.0]], [0.0, 0.0])

    def test_problem(self):
        f = QuadraticFunction([[1.0]], [0.0])
        with self.assertRaises(ArgumentError):
            Problem("bad", f, 0.0, FeasibleSet.whole_space(1), [0.0])
        with self.assertRaises(ArgumentError):
            Problem("bad", f, 1.0, FeasibleSet.whole_space(1), [0.0, 0.0])
        with self.assertRaises(ArgumentError):
            MinimaxProblem("bad", [], 1.0, FeasibleSet.whole_space(1), [0.0])

    def test_as_minimax(self):
        problem = get_problem("quad_well")
        wrapped = problem.as_minimax()
        self.assertEqual(wrapped.M, 1)
        x = np.array([0.3, 0.7])
        self.assertEqual(wrapped.value(x), problem.value(x))
        assert_array_equal(wrapped.gradients(x)[0], problem.gradient(x))
        assert_array_equal(wrapped.x_star, problem.x_star)


if __name__ == "__main__":
    unittest.main()
