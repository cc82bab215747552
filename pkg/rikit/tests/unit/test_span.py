#
# Copyright (c) 2026 rikit developers. All Rights Reserved.
#
#    Licensed under the Apache License, Version 2.0 (the "License"); you may
#    not use this file except in compliance with the License. You may obtain
#    a copy of the License at
#
#         http://www.apache.org/licenses/LICENSE-2.0
#
#    Unless required by applicable law or agreed to in writing, software
#    distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
#    WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
#    License for the specific language governing permissions and limitations
#    under the License.
#

import logging
import math
from fractions import Fraction as F

import unittest

from rikit import generators
from rikit import norms
from rikit import span
from rikit import stepfn
from rikit.norms import NormDescriptor
from rikit.stepfn import IntervalSet
from rikit.stepfn import StepFunction


L1 = NormDescriptor.l1()
ZERO = StepFunction.zero()


def indicator(a, b, value=1):
    return StepFunction.indicator(IntervalSet.interval(a, b), value)


class TestDecompositions(unittest.TestCase):

    def setUp(self):
        """Test case setup"""
        logging.disable(logging.CRITICAL)

    def test_smallcom_exact(self):
        """P(A) = 1/m leaves no residual."""
        result = span.smallcom_decomposition(IntervalSet.interval(0, F(1, 3)),
                                             3)
        self.assertEqual(ZERO, result.residual)
        self.assertTrue(result.verify())
        self.assertEqual(3, len(result.pairs))

    def test_smallcom_residual(self):
        """P(A) = 1/9 with m = 7 leaves an L1 residual of 4/81."""
        result = span.smallcom_decomposition(IntervalSet.interval(0, F(1, 9)),
                                             7)
        self.assertTrue(result.verify())
        self.assertEqual(F(4, 81), result.residual_norm(L1).exact)
        self.assertTrue(result.residual_norm(L1).is_le(F(2, 7)))

    def test_smallcom_measure_too_large(self):
        """P(A) > 1/m is rejected."""
        with self.assertRaises(stepfn.PreconditionError):
            span.smallcom_decomposition(IntervalSet.interval(0, F(1, 5)), 7)
        with self.assertRaises(stepfn.PreconditionError):
            span.smallcom_decomposition(IntervalSet.empty(), 0)

    def test_smallcom_empty(self):
        """The empty set decomposes trivially."""
        result = span.smallcom_decomposition(IntervalSet.empty(), 4)
        self.assertEqual([], result.pairs)
        self.assertEqual(ZERO, result.residual)

    def test_rational_measure(self):
        """P(A) = n/m decomposes exactly."""
        A = IntervalSet([(0, F(1, 8)), (F(1, 2), F(7, 8))])
        result = span.rational_measure_decomposition(A, 2)
        self.assertEqual(ZERO, result.residual)
        self.assertEqual(StepFunction.indicator(A) - F(1, 2), result.target)
        with self.assertRaises(stepfn.PreconditionError):
            span.rational_measure_decomposition(A, 3)
        with self.assertRaises(stepfn.PreconditionError):
            span.rational_measure_decomposition(IntervalSet.full(), 4)

    def test_general_set(self):
        """Residuals stay below (2/m) ||1|| for every kind."""
        A = IntervalSet.interval(0, F(501, 1000))
        for m in (3, 4, 7, 30):
            result = span.general_set_decomposition(A, m)
            self.assertTrue(result.verify())
            self.assertEqual(StepFunction.indicator(A) - F(501, 1000),
                             result.target)
            for d in norms.standard_descriptors():
                bound = norms.to_mpf(F(2, m)) * \
                    norms.norm(StepFunction.constant(1), d).approx
                self.assertTrue(result.residual_norm(d).is_le(
                    bound, F(1, 10 ** 9)))

    def test_general_set_random(self):
        """Random sets and m obey the residual bound."""
        for i in range(20):
            rng = generators.instance_rng(0, 'general_set', i)
            A = generators.random_interval_set(rng)
            if not 0 < A.measure < 1:
                continue
            m = int(rng.integers(3, 12))
            result = span.general_set_decomposition(A, m)
            self.assertTrue(result.verify())
            self.assertTrue(result.residual_norm(L1).is_le(F(2, m)))

    def test_general_set_preconditions(self):
        """m < 3 and trivial measures are rejected."""
        with self.assertRaises(stepfn.PreconditionError):
            span.general_set_decomposition(IntervalSet.interval(0, F(1, 3)),
                                           2)
        with self.assertRaises(stepfn.PreconditionError):
            span.general_set_decomposition(IntervalSet.full(), 5)
        with self.assertRaises(stepfn.PreconditionError):
            span.general_set_decomposition(IntervalSet.empty(), 5)

    def test_simple_function(self):
        """Quarter levels decompose exactly with m = 4."""
        X = StepFunction.from_segments([(0, F(1, 4), 2), (F(1, 4), 1, 5)])
        result = span.simple_function_decomposition(X, 4)
        self.assertEqual(X - X.expectation(), result.target)
        self.assertEqual(ZERO, result.residual)
        self.assertTrue(result.verify())

    def test_simple_function_residual(self):
        """Other levels leave a verified residual."""
        X = StepFunction.from_segments([(0, F(1, 7), 3), (F(1, 7), 1, -1)])
        result = span.simple_function_decomposition(X, 5)
        self.assertTrue(result.verify())
        self.assertNotEqual(ZERO, result.residual)

    def test_pairs_must_be_equidistributed(self):
        """Mismatched distributions are rejected."""
        with self.assertRaises(stepfn.PreconditionError):
            span.EquidistributedPair(indicator(0, F(1, 2)),
                                     indicator(0, F(1, 4)))

    def test_scaled_and_json(self):
        """Scaling multiplies every part; JSON lists residual norms."""
        result = span.smallcom_decomposition(IntervalSet.interval(0, F(1, 9)),
                                             7)
        doubled = result.scaled(2)
        self.assertTrue(doubled.verify())
        self.assertEqual(result.residual * 2, doubled.residual)
        data = result.to_json([L1])
        self.assertEqual(7, len(data['pairs']))
        self.assertEqual('1/7', data['pairs'][0]['coefficient'])
        self.assertEqual('4/81', data['residual_norms'][L1.name]['exact'])


class TestDistance(unittest.TestCase):

    def setUp(self):
        """Test case setup"""
        logging.disable(logging.CRITICAL)

    def test_golden_section(self):
        """A parabola's minimizer is found to tolerance."""
        t, value = span.golden_section(lambda t: (t - 1.3) ** 2, -5.0, 5.0,
                                       1e-10)
        self.assertAlmostEqual(1.3, t, places=6)
        self.assertAlmostEqual(0.0, value, places=10)

    def test_golden_section_wide_bracket(self):
        """Far-out brackets stop on the relative tolerance."""
        calls = []

        def g(t):
            calls.append(t)
            return (t - 2e7) ** 2

        t, _ = span.golden_section(g, 8388607.0, 33554431.0,
                                   span.DEFAULT_GOLDEN_TOL)
        self.assertAlmostEqual(2e7, t, delta=0.01)
        self.assertTrue(len(calls) < span.MAX_GOLDEN_STEPS)

    def test_golden_section_step_cap(self):
        """A zero tolerance still returns after the step cap."""
        calls = []

        def g(t):
            calls.append(t)
            return abs(t)

        t, _ = span.golden_section(g, -1.0, 1.0, 0.0)
        self.assertEqual(span.MAX_GOLDEN_STEPS + 2, len(calls))
        self.assertAlmostEqual(0.0, t, places=6)

    def test_distance_in_span(self):
        """A function in the span has distance close to zero."""
        X = indicator(0, F(1, 2)) - F(1, 2)
        gens = [span.EquidistributedPair(indicator(0, F(1, 2)),
                                         indicator(F(1, 2), 1))]
        value = span.distance_upper_bound(X, gens, NormDescriptor.lp(2), 40)
        self.assertTrue(float(value) < 1e-6)
        self.assertTrue(span.l2_projection_distance(X, gens) < 1e-9)

    def test_no_budget(self):
        """Without line searches the bound is ||X||."""
        X = indicator(0, F(1, 3), 3)
        gens = [span.EquidistributedPair(indicator(0, F(1, 3)),
                                         indicator(F(1, 3), F(2, 3)))]
        self.assertEqual(1, span.distance_upper_bound(X, gens, L1, 0).exact)
        self.assertEqual(1, span.distance_upper_bound(X, [], L1, 10).exact)
        self.assertAlmostEqual(math.sqrt(3),
                               span.l2_projection_distance(X, []))

    def test_descent_against_least_squares(self):
        """The L2 descent bound never beats the least squares optimum."""
        L2 = NormDescriptor.lp(2)
        for i in range(5):
            rng = generators.instance_rng(0, 'descent', i)
            X = generators.random_step_function(rng)
            gens = []
            for _ in range(2):
                U = generators.random_step_function(rng)
                gens.append(span.EquidistributedPair(
                    U, generators.random_shuffle(U, rng)))
            bound = span.distance_upper_bound(X, gens, L2, 40, seed=i)
            self.assertTrue(float(bound) >=
                            span.l2_projection_distance(X, gens) - 1e-9)
            self.assertTrue(bound.is_le(norms.norm(X, L2)))

    def oracle_instance(self, i):
        rng = generators.instance_rng(0, 'oracle_distance', i)
        X = generators.random_step_function(rng, low=1, high=11)
        gens = []
        for _ in range(2):
            G = generators.random_step_function(rng)
            gens.append(span.EquidistributedPair(
                G, generators.shuffle_segments(G, rng)))
        return X, gens

    def test_descent_matches_least_squares(self):
        """With a full budget the L2 descent reaches the projection."""
        L2 = NormDescriptor.lp(2)
        for i in range(3):
            X, gens = self.oracle_instance(i)
            bound = float(span.distance_upper_bound(X, gens, L2, 400,
                                                    seed=i))
            oracle = span.l2_projection_distance(X, gens)
            self.assertAlmostEqual(oracle, bound, delta=1e-6 * oracle)

    def test_bound_decreases_with_budget(self):
        """More line searches never give a larger bound."""
        for d in (L1, NormDescriptor.counterexample()):
            X, gens = self.oracle_instance(5)
            bounds = [float(span.distance_upper_bound(X, gens, d, budget,
                                                      seed=5))
                      for budget in (5, 20, 80)]
            for before, after in zip(bounds, bounds[1:]):
                self.assertTrue(after <= before * (1 + 1e-6), (d.name, bounds))

    def test_bound_decreases_with_generators(self):
        """Adding a generator never gives a larger L2 bound."""
        L2 = NormDescriptor.lp(2)
        for i in range(3):
            X, gens = self.oracle_instance(i)
            fewer = float(span.distance_upper_bound(X, gens[:1], L2, 400,
                                                    seed=i))
            more = float(span.distance_upper_bound(X, gens, L2, 400, seed=i))
            self.assertTrue(more <= fewer * (1 + 1e-6), (fewer, more))


class TestFunctionals(unittest.TestCase):

    def setUp(self):
        """Test case setup"""
        logging.disable(logging.CRITICAL)

    def test_constant_kernel_collapses(self):
        """f(X) = f(1) E[X] when the kernel is constant."""
        f = span.RepresentedFunctional(StepFunction.constant(3))
        self.assertTrue(span.collapses_to_mean(f))
        self.assertIsNone(span.law_invariance_witness(f))
        for i in range(10):
            X = generators.random_step_function(
                generators.instance_rng(0, 'collapse', i))
            self.assertTrue(span.collapse_check(f, X))
            self.assertEqual(3 * X.expectation(), f(X))

    def test_law_invariance_witness(self):
        """A nonconstant kernel separates two sets of equal measure."""
        f = span.RepresentedFunctional(indicator(0, F(1, 2)))
        self.assertFalse(span.collapses_to_mean(f))
        A, B = span.law_invariance_witness(f)
        self.assertEqual(IntervalSet.interval(0, F(1, 4)), A)
        self.assertEqual(IntervalSet.interval(F(1, 2), F(3, 4)), B)
        self.assertEqual(A.measure, B.measure)
        self.assertNotEqual(f(StepFunction.indicator(A)),
                            f(StepFunction.indicator(B)))
        self.assertFalse(span.collapse_check(f, indicator(0, F(1, 4))))

    def test_positive_part(self):
        """f+ has kernel Y+ and dominates f on nonnegative X."""
        Y = StepFunction.from_segments([(0, F(1, 2), 1), (F(1, 2), 1, -2)])
        f = span.RepresentedFunctional(Y)
        fplus = span.positive_part_functional(f)
        self.assertEqual(Y.positive_part(), fplus.Y)
        for i in range(10):
            X = generators.random_nonnegative(
                generators.instance_rng(0, 'positive_part', i))
            self.assertTrue(fplus(X) >= f(X))
            self.assertEqual(fplus(X), f(stepfn.restrict(
                X, IntervalSet.interval(0, F(1, 2)))))
