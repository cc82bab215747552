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
The span of equidistributed differences and functionals X -> E[XY].

A mean-zero function X - E[X] is written as a combination
sum_j c_j (U_j - V_j) of differences of equidistributed pairs plus a
residual. Indicators of sets whose measure is a multiple of 1/m decompose
exactly; other sets leave a residual of norm at most (2/m) ||1||.
"""

import logging
import math
from fractions import Fraction

import numpy as np

from rikit import norms
from rikit import stepfn


LOG = logging.getLogger(__name__)

GOLDEN = (math.sqrt(5) - 1) / 2.
DEFAULT_RESTARTS = 8
DEFAULT_GOLDEN_TOL = 1e-10
MAX_EXPANSIONS = 60
MAX_GOLDEN_STEPS = 200


class EquidistributedPair(object):
    """Two step functions with identical distributions."""

    __slots__ = ('U', 'V')

    def __init__(self, U, V):
        if not stepfn.same_distribution(U, V):
            raise stepfn.PreconditionError("U and V are not "
                                           "equidistributed")
        self.U = U
        self.V = V

    def difference(self):
        return self.U - self.V

    def to_json(self):
        return {'U': self.U.to_json(), 'V': self.V.to_json()}


class SpanDecomposition(object):
    """target = sum_j c_j (U_j - V_j) + residual."""

    def __init__(self, target, pairs, residual=None):
        self.target = target
        self.pairs = list(pairs)
        if residual is None:
            residual = target - self.combination()
        self.residual = residual

    def combination(self):
        return sum((c * pair.difference() for c, pair in self.pairs),
                   stepfn.StepFunction.zero())

    def verify(self):
        """Exact reconstruction check."""
        return self.target - self.combination() - self.residual == \
            stepfn.StepFunction.zero()

    def scaled(self, c):
        c = stepfn.as_rational(c)
        return SpanDecomposition(self.target * c,
                                 [(c * a, pair) for a, pair in self.pairs],
                                 self.residual * c)

    def __add__(self, other):
        return SpanDecomposition(self.target + other.target,
                                 self.pairs + other.pairs,
                                 self.residual + other.residual)

    def residual_norm(self, d):
        return norms.norm(self.residual, d)

    def to_json(self, descriptors=()):
        return {
            'target': self.target.to_json(),
            'pairs': [dict(coefficient=stepfn.format_rational(c),
                           **pair.to_json()) for c, pair in self.pairs],
            'residual': self.residual.to_json(),
            'residual_norms': dict((d.name, self.residual_norm(d).to_json())
                                   for d in descriptors),
        }


def _centered_indicator(A):
    return (stepfn.StepFunction.indicator(A) -
            stepfn.StepFunction.constant(A.measure))


def smallcom_decomposition(A, m):
    """1_A - P(A) = (1/m) sum_i (1_A - 1_{A_i}) + residual.

    A_1 = A and A_2..A_m are disjoint copies of A taken from the left of
    the complement of A. The residual (1/m) 1_{U A_i} - P(A) vanishes
    exactly when P(A) = 1/m.
    """
    if m < 1:
        raise stepfn.PreconditionError("m must be >= 1, got %s" % m)
    mu = A.measure
    if mu > Fraction(1, m):
        raise stepfn.PreconditionError("P(A) = %s exceeds 1/%d" % (mu, m))
    target = _centered_indicator(A)
    if not A:
        return SpanDecomposition(target, [])
    indicator = stepfn.StepFunction.indicator(A)
    rest = A.complement()
    pairs = [(Fraction(1, m), EquidistributedPair(indicator, indicator))]
    for _ in range(1, m):
        Ai = rest.take_measure(mu)
        rest = rest.difference(Ai)
        pairs.append((Fraction(1, m),
                      EquidistributedPair(indicator,
                                          stepfn.StepFunction.indicator(Ai))))
    return SpanDecomposition(target, pairs)


def rational_measure_decomposition(A, m):
    """Exact decomposition of 1_A - P(A) when P(A) = n/m, 1 <= n < m."""
    fit = A.measure * m
    if fit.denominator != 1 or not 1 <= fit < m:
        raise stepfn.PreconditionError("P(A) = %s is not n/%d with "
                                       "1 <= n < %d" % (A.measure, m, m))
    result = SpanDecomposition(stepfn.StepFunction.zero(), [])
    rest = A
    for _ in range(fit.numerator):
        block = rest.take_measure(Fraction(1, m))
        rest = rest.difference(block)
        result = result + smallcom_decomposition(block, m)
    return result


def general_set_decomposition(A, m):
    """Decompose 1_A - P(A) with residual norm at most (2/m) ||1||.

    A is split into its leftmost part B of measure (n-1)/m, n = ceil(m P(A)),
    which decomposes exactly, and a remainder C with P(C) < 1/m.
    """
    mu = A.measure
    if not 0 < mu < 1:
        raise stepfn.PreconditionError("P(A) = %s is not in (0,1)" % mu)
    if m < 3:
        raise stepfn.PreconditionError("m must be >= 3, got %s" % m)
    if (mu * m).denominator == 1:
        LOG.debug("P(A) = %s fits 1/%d exactly" % (mu, m))
        return rational_measure_decomposition(A, m)
    n = math.ceil(mu * m)
    B = A.take_measure(Fraction(n - 1, m))
    C = A.difference(B)
    result = smallcom_decomposition(C, m)
    if n > 1:
        result = rational_measure_decomposition(B, m) + result
    return result


def simple_function_decomposition(X, m):
    """Decompose X - E[X] level set by level set.

    Levels whose measure is a multiple of 1/m are decomposed exactly, the
    others through general_set_decomposition with max(m, 3).
    """
    target = X - stepfn.StepFunction.constant(X.expectation())
    result = SpanDecomposition(stepfn.StepFunction.zero(), [])
    for value, mass in X.distribution().items():
        if value == 0 or mass == 1:
            continue
        A = stepfn.IntervalSet((a, b) for a, b, v in X.segments()
                               if v == value)
        if (mass * m).denominator == 1:
            part = rational_measure_decomposition(A, m)
        else:
            part = general_set_decomposition(A, max(m, 3))
        result = result + part.scaled(value)
    return SpanDecomposition(target, result.pairs, result.residual)


def _float_problem(X, gens):
    cells = stepfn.common_partition(
        [X] + [g.U for g in gens] + [g.V for g in gens])
    widths = np.array([float(b - a) for a, b, _ in cells])
    x = np.array([float(row[0]) for _, _, row in cells])
    J = len(gens)
    G = np.array([[float(row[1 + j] - row[1 + J + j]) for j in range(J)]
                  for _, _, row in cells]).reshape(len(cells), J)
    return widths, x, G


def _bracket(g, g0):
    """Return (lo, hi) around the minimizer of a convex g with g(0) = g0."""
    step = 1.0
    g1 = g(step)
    if g1 > g0:
        step = -step
        g1 = g(step)
        if g1 > g0:
            return -1.0, 1.0
    x0, x1, gx1 = 0.0, step, g1
    for _ in range(MAX_EXPANSIONS):
        x2 = x1 + 2 * (x1 - x0)
        gx2 = g(x2)
        if gx2 >= gx1:
            return min(x0, x2), max(x0, x2)
        x0, x1, gx1 = x1, x2, gx2
    return min(x0, x1), max(x0, x1)


def golden_section(g, lo, hi, tol):
    """Minimize a unimodal g on [lo, hi].

    Stops once the bracket is narrower than tol relative to its endpoints,
    or after MAX_GOLDEN_STEPS shrinks.
    """
    upper = lo + GOLDEN * (hi - lo)
    lower = lo + (1 - GOLDEN) * (hi - lo)
    g_upper, g_lower = g(upper), g(lower)
    for _ in range(MAX_GOLDEN_STEPS):
        if hi - lo <= tol * max(1.0, abs(lo), abs(hi)):
            break
        if g_upper < g_lower:
            lo, lower, g_lower = lower, upper, g_upper
            upper = lo + GOLDEN * (hi - lo)
            g_upper = g(upper)
        else:
            hi, upper, g_upper = upper, lower, g_lower
            lower = lo + (1 - GOLDEN) * (hi - lo)
            g_lower = g(lower)
    if g_upper < g_lower:
        return upper, g_upper
    return lower, g_lower


def _descend(objective, start, budget, tol):
    """Cyclic coordinate descent; returns (best, value, searches used)."""
    c = start.copy()
    value = objective(c)
    used = 0
    while used < budget:
        previous = value
        for j in range(len(c)):
            if used >= budget:
                break

            def g(t, j=j):
                trial = c.copy()
                trial[j] += t
                return objective(trial)

            lo, hi = _bracket(g, value)
            t, gt = golden_section(g, lo, hi, tol)
            used += 1
            if gt < value:
                c[j] += t
                value = gt
        if value == 0 or previous - value <= 1e-9 * value:
            break
    return c, value, used


def distance_upper_bound(X, gens, d, budget, restarts=DEFAULT_RESTARTS,
                         seed=0, golden_tol=DEFAULT_GOLDEN_TOL):
    """Upper bound on the d-distance from X to the span of ``gens``.

    ``budget`` counts one-dimensional line searches over all restarts.
    Restart 0 starts at the origin, later ones at seeded uniform points in
    [-2, 2]. The best coefficients found are re-evaluated exactly.
    """
    gens = list(gens)
    baseline = norms.norm(X, d)
    if budget <= 0 or not gens:
        return baseline
    widths, x, G = _float_problem(X, gens)

    def objective(c):
        return norms.float_norm(x - G.dot(c), widths, d)

    rng = np.random.default_rng(seed)
    best_c, best_value = np.zeros(len(gens)), objective(np.zeros(len(gens)))
    remaining = budget
    for restart in range(restarts):
        if remaining <= 0:
            break
        if restart == 0:
            start = np.zeros(len(gens))
        else:
            start = rng.uniform(-2.0, 2.0, len(gens))
        c, value, used = _descend(objective, start, remaining, golden_tol)
        remaining -= used
        LOG.debug("Restart %d: value %.6g after %d line searches"
                  % (restart, value, used))
        if value < best_value:
            best_c, best_value = c, value
    candidate = X - sum((Fraction(float(cj)) * g.difference()
                         for cj, g in zip(best_c, gens)),
                        stepfn.StepFunction.zero())
    exact = norms.norm(candidate, d)
    if baseline.is_le(exact):
        return baseline
    return exact


def l2_projection_distance(X, gens):
    """L2 distance from X to span(gens) by least squares."""
    gens = list(gens)
    if not gens:
        return math.sqrt(float((X * X).expectation()))
    widths, x, G = _float_problem(X, gens)
    root = np.sqrt(widths)
    coefficients = np.linalg.lstsq(G * root[:, None], x * root, rcond=None)[0]
    residual = x - G.dot(coefficients)
    return float(np.sqrt(np.dot(widths, residual ** 2)))


class RepresentedFunctional(object):
    """The functional X -> E[XY] with kernel Y."""

    __slots__ = ('Y',)

    def __init__(self, Y):
        self.Y = Y

    def __call__(self, X):
        return pairing(self, X)


def pairing(f, X):
    return (X * f.Y).expectation()


def collapses_to_mean(f):
    """A represented functional collapses to the mean iff its kernel is
    constant.
    """
    return len(f.Y) == 1


def collapse_check(f, X):
    """Exact test of f(X) = f(1) E[X]."""
    return pairing(f, X) == pairing(f, stepfn.StepFunction.constant(1)) * \
        X.expectation()


def law_invariance_witness(f):
    """Equal-measure sets A, B with E[Y 1_A] != E[Y 1_B], or None.

    alpha is the midpoint of the extreme kernel values; A and B are the
    leftmost parts of {Y > alpha} and {Y < alpha} of measure half the
    smaller of the two.
    """
    Y = f.Y
    if collapses_to_mean(f):
        return None
    alpha = (max(Y.values) + min(Y.values)) / 2
    above = stepfn.IntervalSet((a, b) for a, b, v in Y.segments()
                               if v > alpha)
    below = stepfn.IntervalSet((a, b) for a, b, v in Y.segments()
                               if v < alpha)
    mu = min(above.measure, below.measure) / 2
    return above.take_measure(mu), below.take_measure(mu)


def positive_part_functional(f):
    """Kernel of f+(X) = sup{f(Z) : 0 <= Z <= X}."""
    return RepresentedFunctional(f.Y.positive_part())
