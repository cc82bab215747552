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
Hardy-Littlewood majorization and the disjoint-sum lemmas built on it.

Y is majorized by X (Y < X) when int_0^s Y* <= int_0^s X* for every s in
[0,1]. Both sides are piecewise linear in s with kinks only at breakpoints
of Y* or X*, so their difference is linear between consecutive merged
breakpoints and the check at those points is complete.
"""

import logging
from fractions import Fraction

from rikit import norms
from rikit import stepfn


LOG = logging.getLogger(__name__)


class HypothesisError(stepfn.PreconditionError):
    """A lemma hypothesis failed; ``field`` names which one."""

    def __init__(self, field, message):
        super(HypothesisError, self).__init__("%s: %s" % (field, message))
        self.field = field


class ConvexWeights(object):
    """Nonnegative rational weights summing to exactly 1."""

    __slots__ = ('_weights',)

    def __init__(self, weights):
        weights = tuple(stepfn.as_rational(w) for w in weights)
        if not weights:
            raise stepfn.DomainError("At least one weight is required")
        if any(w < 0 for w in weights):
            raise stepfn.DomainError("Weights must be nonnegative")
        if sum(weights) != 1:
            raise stepfn.DomainError("Weights sum to %s, not 1"
                                     % sum(weights))
        self._weights = weights

    @classmethod
    def uniform(cls, k):
        return cls([Fraction(1, k)] * k)

    def __iter__(self):
        return iter(self._weights)

    def __len__(self):
        return len(self._weights)

    def __getitem__(self, i):
        return self._weights[i]

    def __repr__(self):
        return 'ConvexWeights(%s)' % ', '.join(str(w) for w in self._weights)


def prec(Y, X):
    """True iff Y is majorized by X."""
    Ys = stepfn.decreasing_rearrangement(Y)
    Xs = stepfn.decreasing_rearrangement(X)
    points = sorted(set(Ys.breakpoints) | set(Xs.breakpoints))
    lhs = stepfn.partial_integrals(Ys, points)
    rhs = stepfn.partial_integrals(Xs, points)
    return all(y <= x for y, x in zip(lhs, rhs))


def check_majorization_lemma(X, shuffles, w):
    """Evaluate (1/k) (X + ... + X disjointly) < sum_i w_i X_i.

    :param X: nonnegative StepFunction with support measure <= 1/k.
    :param shuffles: k StepFunctions each equidistributed with X.
    :param w: ConvexWeights of length k.
    """
    shuffles = list(shuffles)
    k = len(shuffles)
    if k == 0:
        raise HypothesisError('shuffles', "at least one shuffle is needed")
    if len(w) != k:
        raise HypothesisError('weights', "expected %d weights, got %d"
                              % (k, len(w)))
    if not X.is_nonnegative():
        raise HypothesisError('X', "X must be nonnegative")
    if X.support_measure() > Fraction(1, k):
        raise HypothesisError('support', "P(X != 0) = %s exceeds 1/%d"
                              % (X.support_measure(), k))
    for i, Xi in enumerate(shuffles):
        if not stepfn.same_distribution(Xi, X):
            raise HypothesisError('shuffles[%d]' % i,
                                  "not equidistributed with X")
    lhs = stepfn.disjoint_sum([X] * k) / k
    rhs = sum((wi * Xi for wi, Xi in zip(w, shuffles)),
              stepfn.StepFunction.zero())
    return prec(lhs, rhs)


def _check_another_hypotheses(X, A, As, k):
    if k < 1:
        raise HypothesisError('k', "k must be a positive integer")
    if A.measure > Fraction(1, k):
        raise HypothesisError('A', "P(A) = %s exceeds 1/%d" % (A.measure, k))
    if len(As) != k:
        raise HypothesisError('As', "expected %d sets, got %d" % (k, len(As)))
    inside = stepfn.values_on(abs(X), A)
    outside = stepfn.values_on(abs(X), A.complement())
    if inside and outside and min(inside) < max(outside):
        raise HypothesisError('alpha', "inf |X| on A = %s is below "
                              "sup |X| off A = %s"
                              % (min(inside), max(outside)))
    for i, Ai in enumerate(As):
        if Ai.measure > A.measure:
            raise HypothesisError('As[%d]' % i, "P(A_i) = %s exceeds P(A) = "
                                  "%s" % (Ai.measure, A.measure))


def check_lemma_another(X, A, As, k, d):
    """Return the norms of the disjoint sums of X 1_{A_i} and of k copies
    of X 1_A. Under the hypotheses the first never exceeds the second.
    """
    As = list(As)
    _check_another_hypotheses(X, A, As, k)
    left = stepfn.disjoint_sum([stepfn.restrict(X, Ai) for Ai in As])
    right = stepfn.disjoint_sum([stepfn.restrict(X, A)] * k)
    return norms.norm(left, d), norms.norm(right, d)


class CouplingTrace(object):
    """Intermediate variables of the disjoint-sum comparison.

    ``Z[i]`` ~ |X| 1_{A_i} with ``Z[i]`` <= |X| 1_A; ``U`` are disjoint
    copies of |X| 1_A; ``V[i]`` <= ``U[i]`` with ``V[i]`` ~ ``Z[i]``.
    """

    def __init__(self, B, Z, U, V):
        self.B = B
        self.Z = Z
        self.U = U
        self.V = V

    def left(self):
        return sum(self.V, stepfn.StepFunction.zero())

    def right(self):
        return sum(self.U, stepfn.StepFunction.zero())


def lemma_another_coupling(X, A, As):
    """Build the coupling that proves the disjoint-sum comparison."""
    As = list(As)
    k = len(As)
    _check_another_hypotheses(X, A, As, k)
    X = abs(X)
    XA = stepfn.restrict(X, A)
    B, Z, U, V = [], [], [], []
    mu = A.measure
    for i, Ai in enumerate(As):
        outside = Ai.difference(A)
        Bi = A.difference(Ai).take_measure(outside.measure)
        Zi = (stepfn.restrict(X, Ai.intersection(A)) +
              stepfn.transport(X, outside, Bi))
        Ui = stepfn.transport(X, A, stepfn.IntervalSet.interval(i * mu,
                                                                (i + 1) * mu))
        Vi = stepfn.rank_coupling(Ui, XA, Zi, stepfn.DOMINATES)
        LOG.debug("Coupling %d: P(B_i)=%s" % (i, Bi.measure))
        B.append(Bi)
        Z.append(Zi)
        U.append(Ui)
        V.append(Vi)
    return CouplingTrace(B, Z, U, V)
