import math
import unittest

import numpy as np
from numpy.testing import assert_array_equal

from src.core.errors import ArgumentError, CapabilityError, PreconditionError
from src.oracles import DeltaLOracle, StochasticOracle
from src.problems import QuadraticProblem, get_problem
from src.prox.feasible import FeasibleSet
from src.prox.geometry import ProxSetup
from src.solvers.stochastic import (
    batch_size,
    delta_admissible,
    failure_margin,
    plan,
    run_stochastic,
    total_draws_bound,
)

EPSILON = 0.01
BETA = 0.05
SEEDS = 200


def box_problem() -> QuadraticProblem:
    # 1/2 ||x - c||^2 on [-1, 1]^2: x* = (1, 0.3), f* = 0.125
    c = np.array([1.5, 0.3])
    return QuadraticProblem(
        np.eye(2), c, c=0.5 * float(c @ c),
        feasible=FeasibleSet.box([-1.0, -1.0], [1.0, 1.0]), x0=[-1.0, -1.0], name="box_target",
    )


def run_seed(problem, run_plan, seed, D, setup=None, **kwargs):
    oracle = StochasticOracle(DeltaLOracle(problem, 0.0), D, seed)
    return run_stochastic(
        oracle, None, setup or ProxSetup.euclidean(), problem.feasible, problem.x0,
        run_plan, problem.L, **kwargs,
    )


class TestPlan(unittest.TestCase):
    def test_plan_constants(self):
        p = plan(0.01, 0.05, 1.0, 1.0, 1.0)
        self.assertEqual(p.N, 35)
        self.assertAlmostEqual(p.Omega, math.sqrt(2 * math.log(700)), places=12)
        self.assertAlmostEqual(p.Omega, 3.6197, places=3)
        self.assertAlmostEqual(p.Omega_tilde, (1 + p.Omega) ** 2, places=12)
        self.assertAlmostEqual(p.Omega_tilde, 21.34, places=1)

    def test_batch_size(self):
        self.assertEqual(batch_size(2.5 / 3.0, 1.0, 1.0, 1.0), 3)
        self.assertEqual(batch_size(0.0, 21.34, 0.5, 0.01), 1)
        self.assertEqual(batch_size(1.0, 21.34, 0.5, 0.01), 3201)
        with self.assertRaises(ArgumentError):
            batch_size(1.0, 1.0, 1.0, 0.0)

    def test_plan_arguments(self):
        with self.assertRaises(ArgumentError):
            plan(0.01, 1.0, 1.0, 1.0, 1.0)
        with self.assertRaises(ArgumentError):
            plan(0.0, 0.05, 1.0, 1.0, 1.0)
        with self.assertRaises(ArgumentError):
            plan(0.01, 0.05, 1.0, 0.0, 1.0)
        with self.assertRaises(ArgumentError):
            plan(0.01, 0.05, 1.0, 1.0, -1.0)

    def test_failure_margin(self):
        self.assertAlmostEqual(failure_margin(0.05, 200, 1.96), 0.15 + 1.96 * math.sqrt(0.15 * 0.85 / 200))


class TestStochasticMTM(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.problem = box_problem()
        cls.D = 5e-5
        cls.plan = plan(EPSILON, BETA, cls.problem.L, cls.problem.feasible.diameter(), cls.D)
        cls.traces = [run_seed(cls.problem, cls.plan, seed, cls.D) for seed in range(SEEDS)]

    def test_setup(self):
        self.assertAlmostEqual(self.problem.f_star, 0.125, places=12)
        assert_array_equal(self.problem.x_star, [1.0, 0.3])
        self.assertEqual(self.plan.N, 98)
        self.assertAlmostEqual(self.plan.Omega_tilde, 23.95, delta=0.01)

    def test_high_probability_guarantee(self):
        failures = sum(trace.gaps()[-1] > 4 * EPSILON for trace in self.traces)
        self.assertLessEqual(failures / SEEDS, failure_margin(BETA, SEEDS, 1.96))

    def test_batch_sizes_follow_the_rule(self):
        for trace in self.traces[:20]:
            alphas = trace.column("alpha")[1:]
            expected = [batch_size(self.D, self.plan.Omega_tilde, a, EPSILON) for a in alphas]
            assert_array_equal(trace.column("m_k")[1:], expected)

    def test_draw_count_bound(self):
        for trace in self.traces:
            L0 = min(self.problem.L, float(np.min(trace.column("L_k")[1:])))
            self.assertLessEqual(trace.final.calls_g, total_draws_bound(self.plan, self.problem.L, L0))
            self.assertEqual(trace.meta["draws"], trace.final.calls_g)

    def test_batches_average_in_range(self):
        for trace in self.traces:
            mean = float(np.mean(trace.column("m_k")[1:]))
            self.assertGreaterEqual(mean, 5.0)
            self.assertLessEqual(mean, 50.0)

    def test_constants_stay_below_3L_with_high_probability(self):
        L = self.problem.L
        below = [float(np.max(trace.column("L_k")[1:])) < 3 * L for trace in self.traces]
        margin = 1.96 * math.sqrt(BETA * (1 - BETA) / SEEDS)
        self.assertGreaterEqual(sum(below) / SEEDS, 1 - BETA - margin)

    def test_schedule_growth_when_constants_stay_below_3L(self):
        L = self.problem.L
        checked = 0
        for trace in self.traces:
            if np.max(trace.column("L_k")[1:]) >= 3 * L:
                continue
            k = trace.column("k")[1:]
            A = trace.column("A")[1:]
            self.assertTrue(np.all(A >= (k + 1) ** 2 / (12 * L) * (1 - 1e-12)))
            checked += 1
        self.assertGreater(checked, 0)

    def test_every_run_has_the_planned_length(self):
        for trace in self.traces[:20]:
            self.assertEqual(len(trace) - 1, self.plan.N)

    def test_seeds_replay(self):
        again = run_seed(self.problem, self.plan, 3, self.D)
        assert_array_equal(again.column("f_x"), self.traces[3].column("f_x"))
        assert_array_equal(again.column("m_k"), self.traces[3].column("m_k"))


class TestNoiseless(unittest.TestCase):
    def test_zero_variance_is_deterministic(self):
        problem = box_problem()
        run_plan = plan(EPSILON, BETA, problem.L, problem.feasible.diameter(), 0.0)
        traces = [run_seed(problem, run_plan, seed, 0.0) for seed in range(5)]
        for trace in traces:
            assert_array_equal(trace.column("f_x"), traces[0].column("f_x"))
            assert_array_equal(trace.column("m_k")[1:], 1)
            self.assertLessEqual(trace.gaps()[-1], 4 * EPSILON)


class TestBacktracking(unittest.TestCase):
    def setUp(self):
        # 0.1 ||x - c||^2 run with L = 1, five times its true constant
        c = np.array([0.3, -0.2])
        self.problem = QuadraticProblem(
            0.2 * np.eye(2), 0.2 * c, c=0.1 * float(c @ c),
            feasible=FeasibleSet.box([-1.0, -1.0], [1.0, 1.0]), x0=[-1.0, -1.0], name="flat_box",
        )
        self.L = 1.0
        self.plan = plan(EPSILON, BETA, self.L, self.problem.feasible.diameter(), 0.0)

    def run_flat(self):
        oracle = StochasticOracle(DeltaLOracle(self.problem, 0.0), 0.0, 0)
        return run_stochastic(oracle, None, ProxSetup.euclidean(), self.problem.feasible,
                              self.problem.x0, self.plan, self.L)

    def test_constant_halves_after_acceptance(self):
        L_k = self.run_flat().column("L_k")
        self.assertEqual(L_k[1], 0.5 * self.L)
        self.assertEqual(L_k[2], 0.25 * self.L)
        self.assertLessEqual(float(np.min(L_k[1:])), 0.25 * self.L)

    def test_constants_follow_the_retry_count(self):
        trace = self.run_flat()
        L_k = trace.column("L_k")
        retries = trace.column("retries")
        previous = self.L
        for k in range(1, len(trace)):
            self.assertEqual(L_k[k], previous * 2.0 ** (retries[k] - 1))
            previous = L_k[k]
        self.assertEqual(trace.meta["L0"], self.L)


class TestPreconditions(unittest.TestCase):
    def test_entropy_needs_the_flag(self):
        problem = get_problem("simplex_quad")
        run_plan = plan(EPSILON, BETA, problem.L, problem.feasible.diameter(), 1e-4)
        with self.assertRaises(CapabilityError):
            run_seed(problem, run_plan, 0, 1e-4, setup=ProxSetup.entropy_simplex())
        trace = run_seed(
            problem, run_plan, 0, 1e-4, setup=ProxSetup.entropy_simplex(), allow_unverified_geometry=True
        )
        self.assertTrue(trace.meta["unverified"])

    def test_unbounded_set(self):
        problem = get_problem("quad_well")
        run_plan = plan(EPSILON, BETA, problem.L, 1.0, 1e-4)
        with self.assertRaises(ArgumentError):
            run_seed(problem, run_plan, 0, 1e-4)

    def test_diameter_and_delta(self):
        problem = box_problem()
        small = plan(EPSILON, BETA, problem.L, 1.0, 1e-4)
        with self.assertRaises(PreconditionError):
            run_seed(problem, small, 0, 1e-4)

        run_plan = plan(EPSILON, BETA, problem.L, problem.feasible.diameter(), 1e-4)
        admissible = delta_admissible(run_plan, problem.L)
        oracle = StochasticOracle(DeltaLOracle(problem, 10 * admissible), 1e-4, 0)
        with self.assertRaises(PreconditionError) as caught:
            run_stochastic(oracle, None, ProxSetup.euclidean(), problem.feasible, problem.x0,
                           run_plan, problem.L)
        self.assertAlmostEqual(caught.exception.admissible, admissible)


if __name__ == "__main__":
    unittest.main()
