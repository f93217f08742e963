import math
import unittest
from fractions import Fraction

import numpy as np
from numpy.testing import assert_allclose

from src.core.errors import ArgumentError
from src.solvers.schedule import (
    DirectionalSchedule,
    StepSchedule,
    ceil_guarded,
    directional_schedule,
    gamma_weights,
    next_alpha,
    solve_alpha_adaptive,
)


class TestStepSchedule(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(next_alpha(1.0, 0.0), 1.0)
        self.assertAlmostEqual(next_alpha(1.0, 1.0), 1.6180339887, places=9)
        self.assertEqual(solve_alpha_adaptive(0.0, 1.0), 1.0)
        self.assertAlmostEqual(solve_alpha_adaptive(1.0, 1.0), (1 + math.sqrt(5)) / 2)
        self.assertAlmostEqual(solve_alpha_adaptive(2.0, 2.0), (1 + math.sqrt(17)) / 4)

    def test_a_equals_l_alpha_squared(self):
        for L in (0.5, 1.0, 7.0):
            schedule = StepSchedule.build(L, 500)
            assert_allclose(schedule.A, L * schedule.alphas ** 2, rtol=1e-10)
            k = np.arange(1, 501)
            self.assertTrue(np.all(schedule.A[1:] >= (k + 1) ** 2 / (4 * L) * (1 - 1e-12)))

    def test_forms_agree(self):
        L, alpha = 3.0, 0.0
        for _ in range(200):
            A = L * alpha * alpha
            nxt = next_alpha(L, alpha)
            self.assertAlmostEqual(nxt / solve_alpha_adaptive(A, L), 1.0, places=12)
            alpha = nxt

    def test_rejects_bad_arguments(self):
        with self.assertRaises(ArgumentError):
            next_alpha(0.0, 1.0)
        with self.assertRaises(ArgumentError):
            next_alpha(1.0, -1.0)
        with self.assertRaises(ArgumentError):
            solve_alpha_adaptive(-1.0, 1.0)
        with self.assertRaises(ArgumentError):
            solve_alpha_adaptive(1.0, -2.0)

    def test_ceil_guarded(self):
        self.assertEqual(ceil_guarded(2.5), 3)
        self.assertEqual(ceil_guarded(3.0 + 1e-13), 3)
        self.assertEqual(ceil_guarded(3.0), 3)
        self.assertEqual(ceil_guarded(-0.5), 0)


def exact_alpha(n: int, k: int) -> Fraction:
    if k == 0:
        return 1 - Fraction(1, n)
    return Fraction(k - 1 + 2 * n, 2 * n * n)


def exact_A(n: int, k: int) -> Fraction:
    return Fraction((k - 1 + 2 * n) ** 2 + k - 1, 4 * n * n)


class TestDirectionalSchedule(unittest.TestCase):
    def test_small_cases(self):
        self.assertEqual(directional_schedule(1, 0), (0.0, 0.0))
        self.assertEqual(directional_schedule(1, 1), (1.0, 1.0))
        self.assertEqual(directional_schedule(2, 0), (0.5, 0.5))
        self.assertEqual(directional_schedule(2, 1), (0.5, 1.0))

    def test_invariants_exact(self):
        for n in (1, 2, 3, 10):
            for k in range(1, 2001):
                a, A, A_prev = exact_alpha(n, k), exact_A(n, k), exact_A(n, k - 1)
                self.assertEqual(A - A_prev, a)
                self.assertGreaterEqual(A, n * n * a * a)
                self.assertLessEqual(A, Fraction((k - 1 + 2 * n) ** 2, 2 * n * n))

    def test_float_schedule_matches(self):
        for n in (1, 2, 5, 50):
            schedule = DirectionalSchedule(n)
            for k in range(0, 10_001, 7):
                self.assertAlmostEqual(schedule.alpha(k), float(exact_alpha(n, k)), places=12)
                self.assertAlmostEqual(schedule.A(k), float(exact_A(n, k)), delta=1e-12 * max(1.0, schedule.A(k)))
                if k >= 1:
                    diff = schedule.A(k) - schedule.A(k - 1)
                    self.assertAlmostEqual(diff, schedule.alpha(k), delta=1e-12 * schedule.A(k))

    def test_gamma_weights(self):
        schedule = DirectionalSchedule(2)
        np.testing.assert_array_equal(gamma_weights(schedule, 0), [1.0])
        assert_allclose(gamma_weights(schedule, 1), [0.0, 1.0], atol=1e-15)
        for n in (1, 3, 7):
            for k in (2, 10, 60):
                self.assertAlmostEqual(float(np.sum(gamma_weights(DirectionalSchedule(n), k))), 1.0, places=12)

    def test_rejects_bad_arguments(self):
        with self.assertRaises(ArgumentError):
            DirectionalSchedule(0)
        with self.assertRaises(ArgumentError):
            directional_schedule(2, -1)
        with self.assertRaises(ArgumentError):
            gamma_weights(DirectionalSchedule(2), -1)


if __name__ == "__main__":
    unittest.main()
