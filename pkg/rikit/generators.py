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

"""
Seeded random instances for the randomized suites.

Every instance draws from its own generator, seeded from the master seed,
the suite name and the instance index:

    SeedSequence([master_seed, crc32(suite_name), index])

so instance i of a suite is the same whether suites run serially or in
parallel. All generated data lives on rational grids.
"""

import zlib
from fractions import Fraction

import numpy as np

from rikit import majorization
from rikit import stepfn


DENOMINATOR = 64


def instance_rng(master_seed, suite, index):
    """Generator for instance ``index`` of ``suite``."""
    entropy = [int(master_seed), zlib.crc32(suite.encode('utf-8')),
               int(index)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def _grid_points(rng, count, denominator):
    """``count`` distinct sorted interior points of the 1/denominator grid."""
    count = min(count, denominator - 1)
    picks = rng.choice(np.arange(1, denominator), size=count, replace=False)
    return [Fraction(int(p), denominator) for p in sorted(picks)]


def random_step_function(rng, cells=6, denominator=DENOMINATOR, low=-5,
                         high=5, value_denominator=1):
    """Step function with up to ``cells`` segments and values in
    [low, high] on the 1/value_denominator grid.
    """
    bps = [Fraction(0)] + _grid_points(rng, cells - 1, denominator) + \
        [Fraction(1)]
    values = [Fraction(int(v), value_denominator) for v in
              rng.integers(low * value_denominator,
                           high * value_denominator + 1,
                           size=len(bps) - 1)]
    return stepfn.StepFunction(bps, values)


def random_nonnegative(rng, cells=6, denominator=DENOMINATOR, high=5):
    return random_step_function(rng, cells, denominator, 0, high)


def random_interval_set(rng, max_intervals=3, denominator=DENOMINATOR,
                        max_measure=None):
    """Union of up to ``max_intervals`` grid intervals, trimmed from the
    right to at most ``max_measure``.
    """
    points = _grid_points(rng, 2 * max_intervals, denominator)
    A = stepfn.IntervalSet(zip(points[0::2], points[1::2]))
    if max_measure is not None and A.measure > max_measure:
        A = A.take_measure(max_measure)
    return A


def shuffle_segments(X, rng):
    """Equidistributed copy of X: its segments in random order."""
    segments = list(X.segments())
    order = [int(i) for i in rng.permutation(len(segments))]
    pieces = []
    t = Fraction(0)
    for i in order:
        a, b, v = segments[i]
        pieces.append((t, t + (b - a), v))
        t += b - a
    return stepfn.StepFunction.from_segments(pieces)


def random_shuffle(X, rng, cuts=3, denominator=DENOMINATOR):
    """Equidistributed copy of X with extra grid cuts before shuffling."""
    extra = stepfn.StepFunction([Fraction(0)] +
                                _grid_points(rng, cuts, denominator) +
                                [Fraction(1)], range(cuts + 1))
    cells = stepfn.common_partition([X, extra])
    order = [int(i) for i in rng.permutation(len(cells))]
    pieces = []
    t = Fraction(0)
    for i in order:
        a, b, (v, _) = cells[i]
        pieces.append((t, t + (b - a), v))
        t += b - a
    return stepfn.StepFunction.from_segments(pieces)


def random_weights(rng, k, denominator=12):
    """ConvexWeights with numerators drawn from [0, denominator]."""
    raw = [int(v) for v in rng.integers(0, denominator + 1, size=k)]
    if not any(raw):
        raw[int(rng.integers(0, k))] = 1
    total = sum(raw)
    return majorization.ConvexWeights([Fraction(v, total) for v in raw])


def random_small_support(rng, k, cells=4, high=5):
    """Nonnegative X with P(X != 0) <= 1/k, placed at a random offset."""
    scale = Fraction(1, k)
    local = random_step_function(rng, cells, DENOMINATOR, 0, high)
    offset = Fraction(int(rng.integers(0, k)), k)
    return stepfn.StepFunction.from_pieces(
        (offset + a * scale, offset + b * scale, v)
        for a, b, v in local.segments())


def random_rank_triple(rng, direction=stepfn.DOMINATES):
    """(Xp, X1, X2) with Xp ~ X1 and X1 >= X2 (or X1 <= X2)."""
    X1 = random_step_function(rng)
    gap = random_nonnegative(rng, high=3)
    if direction == stepfn.DOMINATES:
        X2 = X1 - gap
    else:
        X2 = X1 + gap
    return random_shuffle(X1, rng), X1, X2


def random_another_instance(rng, k):
    """(X, A, As) satisfying the hypotheses of the disjoint-sum comparison.

    A is the largest level set {|X| >= c} of measure at most 1/k, or a
    leftmost part of the top plateau when every level set is larger.
    """
    X = random_step_function(rng, cells=8)
    bound = Fraction(1, k)
    A = stepfn.IntervalSet.empty()
    for c in sorted(set(abs(v) for v in X.values), reverse=True):
        candidate = stepfn.level_set(X, c)
        if candidate.measure > bound:
            break
        A = candidate
    if not A:
        top = stepfn.level_set(X, X.sup_norm())
        A = top.take_measure(min(top.measure, bound))
    As = [random_interval_set(rng, max_measure=A.measure) for _ in range(k)]
    return X, A, As
