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
from fractions import Fraction as F

import unittest

from rikit import generators
from rikit import majorization
from rikit import stepfn


class TestGenerators(unittest.TestCase):

    def setUp(self):
        """Test case setup"""
        logging.disable(logging.CRITICAL)

    def rngs(self, suite, count=20):
        return [generators.instance_rng(3, suite, i) for i in range(count)]

    def test_instance_rng_is_deterministic(self):
        """Instance generators depend only on seed, suite and index."""
        first = generators.random_step_function(
            generators.instance_rng(1, 'suite', 4))
        again = generators.random_step_function(
            generators.instance_rng(1, 'suite', 4))
        self.assertEqual(first, again)
        draws = set(int(generators.instance_rng(1, name, 0).integers(
            0, 2 ** 62)) for name in ('a', 'b', 'c'))
        self.assertEqual(3, len(draws))

    def test_random_step_function(self):
        """Breakpoints sit on the grid and values in range."""
        for rng in self.rngs('step'):
            X = generators.random_step_function(rng, cells=5)
            self.assertTrue(len(X) <= 5)
            self.assertTrue(all((b * generators.DENOMINATOR).denominator == 1
                                for b in X.breakpoints))
            self.assertTrue(all(-5 <= v <= 5 for v in X.values))
        for rng in self.rngs('nonnegative'):
            self.assertTrue(generators.random_nonnegative(rng)
                            .is_nonnegative())

    def test_random_interval_set(self):
        """The measure cap is respected."""
        for rng in self.rngs('sets'):
            A = generators.random_interval_set(rng, max_measure=F(1, 5))
            self.assertTrue(A.measure <= F(1, 5))
            self.assertTrue(len(A) <= 3)

    def test_shuffles_are_equidistributed(self):
        """Both shuffles preserve the distribution."""
        for rng in self.rngs('shuffle'):
            X = generators.random_step_function(rng)
            self.assertTrue(stepfn.same_distribution(
                X, generators.shuffle_segments(X, rng)))
            self.assertTrue(stepfn.same_distribution(
                X, generators.random_shuffle(X, rng)))

    def test_random_weights(self):
        """Weights are convex."""
        for rng in self.rngs('weights'):
            w = generators.random_weights(rng, 4)
            self.assertEqual(4, len(w))
            self.assertEqual(1, sum(w))

    def test_random_small_support(self):
        """P(X != 0) <= 1/k."""
        for i, rng in enumerate(self.rngs('small_support')):
            k = i % 5 + 1
            X = generators.random_small_support(rng, k)
            self.assertTrue(X.is_nonnegative())
            self.assertTrue(X.support_measure() <= F(1, k))

    def test_random_rank_triple(self):
        """Xp ~ X1 and X1 is ordered against X2."""
        for rng in self.rngs('rank'):
            Xp, X1, X2 = generators.random_rank_triple(rng)
            self.assertTrue(stepfn.same_distribution(Xp, X1))
            self.assertTrue(X1.dominates(X2))
            Xp, X1, X2 = generators.random_rank_triple(rng, stepfn.DOMINATED)
            self.assertTrue(X2.dominates(X1))

    def test_random_another_instance(self):
        """Generated instances satisfy every hypothesis."""
        for i, rng in enumerate(self.rngs('another')):
            k = i % 4 + 1
            X, A, As = generators.random_another_instance(rng, k)
            self.assertEqual(k, len(As))
            majorization._check_another_hypotheses(X, A, As, k)
