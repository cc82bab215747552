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
The r.i. space on which a positive law-invariant functional fails to
collapse to the mean.

With c_n = 1/(2^n (n+1)!) the witness

    Y = sum_{n>=3} n! 1_[c_{n+1}, c_n)

has finite counterexample norm and mean below 1/8, yet Y - E[Y] stays away
from the span of equidistributed differences. This module builds finite
truncations of Y, verifies the norm and mean bounds exactly, replays the
growth lemmas on concrete instances and runs the averaging searches that
show the space is not almost order continuous.
"""

import itertools
import logging
import math
from fractions import Fraction

from rikit import majorization
from rikit import norms
from rikit import report as rep
from rikit import span
from rikit import stepfn


LOG = logging.getLogger(__name__)

ZERO = 'zero'
CAP = 'cap'
TRUNCATIONS = (ZERO, CAP)

DEFAULT_K_MAX = 64
DEFAULT_DEPTH = 18
DEFAULT_TAIL_WIDTH = 8
DEFAULT_EXHAUSTIVE_LIMIT = 1000
DEFAULT_UNIFORM_SAMPLES = 4
GROWTH_DELTA = Fraction(1, 1000)

COUNTEREXAMPLE = norms.NormDescriptor.counterexample()


class MeasureBudgetError(stepfn.PreconditionError):
    """The growing set outran its measure budget."""

    def __init__(self, round_index, message):
        super(MeasureBudgetError, self).__init__(
            "round %d: %s" % (round_index, message))
        self.round_index = round_index


def c_value(n):
    """c_n = 1/(2^n (n+1)!)."""
    return Fraction(1, 2 ** n * math.factorial(n + 1))


window = norms.window


class WitnessConfig(object):
    """Truncation level of the witness and the truncation mode.

    ``zero`` drops the levels above n_max; ``cap`` replaces them by n_max!,
    which keeps the truncation non-increasing.
    """

    def __init__(self, n_max, truncation=ZERO):
        if n_max < 4:
            raise stepfn.DomainError("n_max must be >= 4, got %s" % n_max)
        if truncation not in TRUNCATIONS:
            raise stepfn.DomainError("Unknown truncation %r" % (truncation,))
        self.n_max = n_max
        self.truncation = truncation

    def c(self, n):
        return c_value(n)

    def to_json(self):
        return {'n_max': self.n_max, 'truncation': self.truncation}


def build_witness(cfg):
    """The truncated witness Y_{n_max}."""
    pieces = [(c_value(n + 1), c_value(n), math.factorial(n))
              for n in range(3, cfg.n_max + 1)]
    if cfg.truncation == CAP:
        pieces[-1] = (0, c_value(cfg.n_max), math.factorial(cfg.n_max))
    return stepfn.StepFunction.from_pieces(pieces)


def verify_witness_norm(cfg):
    """Exact term profile and norm of Y_{n_max}, with the bound
    term(l) <= 3 for l >= 4 and monotonicity of the norms in n_max.
    """
    report = rep.ExperimentReport('verify_witness_norm', cfg.to_json())
    with report.timed():
        Y = build_witness(cfg)
        profile = norms.norm_term_profile(Y, cfg.n_max)
        report.record_profile('terms', profile.terms)
        report.record('cutoff', profile.cutoff)
        for n, term in profile.terms:
            if n >= 4:
                report.check_le('term_%d_le_3' % n, term, 3)

        value = norms.norm(Y, COUNTEREXAMPLE)
        report.record('norm', value)
        certified = norms.norm_term_profile(Y, max(profile.cutoff, 1))
        report.check_eq('norm_is_max_below_cutoff', value.exact,
                        max(t for _, t in certified.terms))

        shuffled = stepfn.StepFunction.from_segments(
            _repack(reversed(list(Y.segments()))))
        report.check('terms_law_invariant',
                     norms.norm_term_profile(shuffled, cfg.n_max).terms ==
                     profile.terms)

        series = []
        previous = None
        for j in range(4, cfg.n_max + 1):
            current = norms.norm(build_witness(
                WitnessConfig(j, cfg.truncation)), COUNTEREXAMPLE).exact
            series.append((j, current))
            if previous is not None:
                report.check_le('norm_%d_le_norm_%d' % (j - 1, j),
                                previous, current)
            previous = current
        report.record_profile('norms', series)
    return report


def _repack(segments):
    t = Fraction(0)
    for a, b, v in segments:
        yield t, t + (b - a), v
        t += b - a


def mean_series(n_max):
    """sum_{n=3}^{n_max} n! (c_n - c_{n+1})."""
    return sum((math.factorial(n) * (c_value(n) - c_value(n + 1))
                for n in range(3, n_max + 1)), Fraction(0))


def mean_tail_bound(n_max):
    """Upper bound 1/((n_max+2) 2^n_max) on sum_{n>n_max} 1/(2^n (n+1))."""
    return Fraction(1, (n_max + 2) * 2 ** n_max)


def verify_witness_mean(cfg):
    """Exact E[Y_{n_max}] plus a tail bound, asserted below 1/8."""
    report = rep.ExperimentReport('verify_witness_mean', cfg.to_json())
    with report.timed():
        for n in range(3, cfg.n_max + 2):
            report.check_lt('c_%d_gt_c_%d' % (n, n + 1),
                            c_value(n + 1), c_value(n))
            difference = c_value(n) - c_value(n + 1)
            closed_form = (n + Fraction(3, 2)) / (2 ** n *
                                                  math.factorial(n + 2))
            report.check_eq('c_difference_%d' % n, difference, closed_form)
            report.check_le('mean_term_%d' % n,
                            math.factorial(n) * difference,
                            Fraction(1, 2 ** n * (n + 1)))
        for n in range(4, cfg.n_max + 1):
            report.check('window_%d_between' % n,
                         c_value(n) < window(n) < c_value(n - 1),
                         window(n), c_value(n))

        Y = build_witness(cfg)
        mean = report.record('mean', Y.expectation())
        series = report.record('mean_series', mean_series(cfg.n_max))
        tail = report.record('tail_bound', mean_tail_bound(cfg.n_max))
        total = report.record('mean_bound', series + tail)
        if cfg.truncation == ZERO:
            report.check_eq('mean_matches_series', mean, series)
        report.check_lt('mean_positive', 0, mean)
        report.check_le('mean_le_bound', mean, total)
        report.check_lt('mean_bound_lt_one_eighth', total, Fraction(1, 8))
    return report


def tail_norm(X, c, d):
    """||X 1_{|X| >= c}||_d."""
    return norms.norm(stepfn.restrict(X, stepfn.level_set(X, c)), d)


def tail_profile(X, thresholds, d):
    return [(c, tail_norm(X, c, d)) for c in thresholds]


class GrowthInstance(object):
    """Data of the growth lemmas.

    Y, Z and the pairs (U_i, V_i) are nonnegative, ||Z|| < epsilon and
    sum U_i >= Y - Z + sum V_i. A must satisfy
    P(A) <= 1/((m+1)^k 2^n n!).
    """

    def __init__(self, Y, Z, pairs, epsilon, A, n, k=1):
        self.Y = Y
        self.Z = Z
        self.pairs = list(pairs)
        self.epsilon = stepfn.as_rational(epsilon)
        self.A = A
        self.n = n
        self.k = k
        self._z_norm = None

    @property
    def m(self):
        return len(self.pairs)

    @property
    def U(self):
        return sum((p.U for p in self.pairs), stepfn.StepFunction.zero())

    @property
    def V(self):
        return sum((p.V for p in self.pairs), stepfn.StepFunction.zero())

    @property
    def z_norm(self):
        if self._z_norm is None:
            self._z_norm = norms.norm(self.Z, COUNTEREXAMPLE).exact
        return self._z_norm

    def measure_budget(self, rounds=None):
        rounds = self.k if rounds is None else rounds
        return Fraction(1, (self.m + 1) ** rounds * 2 ** self.n *
                        math.factorial(self.n))

    def validate(self, rounds=None):
        """Raise HypothesisError naming the first failed hypothesis."""
        HypothesisError = majorization.HypothesisError
        if self.n < 1 or self.k < 1:
            raise HypothesisError('n', "n and k must be positive")
        if not self.Y.is_nonnegative():
            raise HypothesisError('Y', "Y must be nonnegative")
        if not self.Z.is_nonnegative():
            raise HypothesisError('Z', "Z must be nonnegative")
        for i, pair in enumerate(self.pairs):
            if not (pair.U.is_nonnegative() and pair.V.is_nonnegative()):
                raise HypothesisError('pairs[%d]' % i,
                                      "U_i and V_i must be nonnegative")
            if not stepfn.same_distribution(pair.U, pair.V):
                raise HypothesisError('pairs[%d]' % i,
                                      "U_i and V_i are not equidistributed")
        if not self.z_norm < self.epsilon:
            raise HypothesisError('epsilon', "||Z|| = %s is not below %s"
                                  % (self.z_norm, self.epsilon))
        if not self.U.dominates(self.Y - self.Z + self.V):
            raise HypothesisError('U', "sum U_i >= Y - Z + sum V_i fails")
        if self.A.measure > self.measure_budget(rounds):
            raise HypothesisError('A', "P(A) = %s exceeds %s"
                                  % (self.A.measure,
                                     self.measure_budget(rounds)))

    def config(self):
        return {'n': self.n, 'k': self.k, 'm': self.m,
                'epsilon': stepfn.format_rational(self.epsilon),
                'measure_A': stepfn.format_rational(self.A.measure)}


def _mass(X, A):
    return stepfn.restrict(X, A).expectation()


def _grow(inst, A, report, prefix):
    """One application of the single-step growth lemma starting from A."""
    U = inst.U
    A_next = A
    for i, pair in enumerate(inst.pairs):
        UA = stepfn.restrict(pair.U, A)
        W = stepfn.rank_coupling(pair.V, pair.U, UA, stepfn.DOMINATES)
        report.check('%sW_%d_le_V' % (prefix, i), pair.V.dominates(W))
        report.check('%sW_%d_equidistributed' % (prefix, i),
                     stepfn.same_distribution(W, UA))
        A_next = A_next.union(W.support())
    scale = Fraction(1, inst.n * 2 ** inst.n)
    report.check_le('%smeasure_growth' % prefix, A_next.measure,
                    (inst.m + 1) * A.measure)
    z_mass = _mass(inst.Z, A_next)
    z_head = stepfn.partial_integral(
        stepfn.decreasing_rearrangement(inst.Z), window(inst.n))
    report.check_le('%sZ_mass_le_head' % prefix, z_mass, z_head)
    report.check_le('%sZ_head_le_norm' % prefix, z_head, inst.z_norm * scale)
    gain = _mass(U, A_next) - _mass(U, A)
    report.check_le('%sgrowth_inequality' % prefix,
                    _mass(inst.Y, A) - inst.epsilon * scale, gain)
    return A_next


def lemma41_construct(inst):
    """Grow A once to A' with E[U 1_A'] - E[U 1_A] >= E[Y 1_A] - eps/(n 2^n).

    :returns: (A', report)
    """
    report = rep.ExperimentReport('lemma41_construct', inst.config())
    with report.timed():
        inst.validate(rounds=1)
        A_next = _grow(inst, inst.A, report, '')
        report.record('measure_A_prime', A_next.measure)
    return A_next, report


def lemma42_iterate(inst):
    """Apply the single growth step k times, A <- A' each round.

    :returns: (A_k, report)
    :raises MeasureBudgetError: when a round starts over budget.
    """
    report = rep.ExperimentReport('lemma42_iterate', inst.config())
    with report.timed():
        inst.validate()
        U = inst.U
        A = inst.A
        one_step = inst.measure_budget(rounds=1)
        for r in range(inst.k):
            if A.measure > one_step:
                raise MeasureBudgetError(r, "P(A) = %s exceeds %s"
                                         % (A.measure, one_step))
            A = _grow(inst, A, report, 'round_%d.' % r)
            LOG.debug("Round %d: P(A) = %s" % (r, A.measure))
        scale = Fraction(inst.k, inst.n * 2 ** inst.n)
        report.check_le('measure_budget', A.measure,
                        (inst.m + 1) ** inst.k * inst.A.measure)
        lhs = _mass(U, A)
        rhs = (inst.k * _mass(inst.Y, inst.A) + _mass(U, inst.A) -
               inst.epsilon * scale)
        report.record('E_U_A_final', lhs)
        report.record('lower_bound', rhs)
        report.check_le('iterated_growth_inequality', rhs, lhs)
    return A, report


def generate_growth_instance(rng, m=2, n=6, k=1, cells=16, top=4, A=None):
    """Random instance satisfying every growth hypothesis by construction.

    V_i has integer values in [0, top] on ``cells`` equal cells, U_i is a
    cell shuffle of V_i, D = sum U_i - sum V_i, Y = D+, Z = D- + 1/1000
    and epsilon = ||Z|| + 1/1000. Unless given, A is an interval at the
    left end of a random cell with the largest admissible measure.
    """
    width = Fraction(1, cells)
    bps = [i * width for i in range(cells + 1)]
    pairs = []
    for _ in range(m):
        values = [int(v) for v in rng.integers(0, top + 1, size=cells)]
        order = [int(j) for j in rng.permutation(cells)]
        V = stepfn.StepFunction(bps, values)
        U = stepfn.StepFunction(bps, [values[j] for j in order])
        pairs.append(span.EquidistributedPair(U, V))
    D = (sum((p.U for p in pairs), stepfn.StepFunction.zero()) -
         sum((p.V for p in pairs), stepfn.StepFunction.zero()))
    Y = D.positive_part()
    Z = D.negative_part() + GROWTH_DELTA
    epsilon = norms.norm(Z, COUNTEREXAMPLE).exact + GROWTH_DELTA
    if A is None:
        budget = Fraction(1, (m + 1) ** k * 2 ** n * math.factorial(n))
        start = int(rng.integers(0, cells)) * width
        A = stepfn.IntervalSet.interval(start, start + min(budget, width))
    return GrowthInstance(Y, Z, pairs, epsilon, A, n, k)


def degenerate_growth_instance(m=1, n=6):
    """Z = 0, Y = 0 and identity pairs."""
    pairs = [span.EquidistributedPair(stepfn.StepFunction.constant(1),
                                      stepfn.StepFunction.constant(1))
             for _ in range(m)]
    A = stepfn.IntervalSet.interval(
        0, Fraction(1, (m + 1) * 2 ** n * math.factorial(n)))
    return GrowthInstance(stepfn.StepFunction.zero(),
                          stepfn.StepFunction.zero(), pairs, GROWTH_DELTA,
                          A, n)


def growth_level(m, k, start=6):
    """Least n >= start with c_n - c_{n+1} <= 1/((m+1)^k 2^n n!)."""
    n = start
    while (c_value(n) - c_value(n + 1) >
           Fraction(1, (m + 1) ** k * 2 ** n * math.factorial(n))):
        n += 1
    return n


def growth_demo(rng, k=3, m=2):
    """Threshold line of the non-density argument.

    With A = [c_{n+1}, c_n) and epsilon = 1/4 the iterated bound reads
    n 2^n E[U 1_A'] >= k (n (n+3/2)/((n+1)(n+2)) - 1/4), which exceeds k/4.
    The identity is checked exactly; the iteration is replayed on a
    generated instance over the same A.
    """
    n = growth_level(m, k)
    report = rep.ExperimentReport('growth_demo', {'k': k, 'm': m, 'n': n})
    with report.timed():
        A = stepfn.IntervalSet.interval(c_value(n + 1), c_value(n))
        head = (n * (n + Fraction(3, 2)) /
                ((n + 1) * (n + 2)))
        report.check_eq('witness_mass_on_A',
                        n * 2 ** n * math.factorial(n) *
                        (c_value(n) - c_value(n + 1)), head)
        bound = k * (head - Fraction(1, 4))
        report.record('threshold_bound', bound)
        report.check_lt('bound_exceeds_k_over_4', Fraction(k, 4), bound)

        inst = generate_growth_instance(rng, m=m, n=n, k=k, A=A)
        A_final, iterate = lemma42_iterate(inst)
        report.merge(iterate)
        observed = n * 2 ** n * _mass(inst.U, A_final)
        report.record_exploratory('observed_scaled_mass', observed)
        report.record_exploratory('threshold_k_over_4', Fraction(k, 4))
    return report


def _check_search_sets(sets):
    total = sum((A.measure for A in sets), Fraction(0))
    if total > 1:
        raise stepfn.PreconditionError("Set measures sum to %s > 1" % total)
    for i, (A, B) in enumerate(zip(sets, sets[1:])):
        if not B.issubset(A):
            raise stepfn.PreconditionError("Sets are not decreasing at "
                                           "index %d" % (i + 1))


class _AverageNorms(object):
    """Memoized ||(1/k) (+) X 1_{A_{n_i}}||_d over index multisets."""

    def __init__(self, pieces, d):
        self.pieces = pieces
        self.support = [P.support_measure() for P in pieces]
        self.d = d
        self.cache = {}

    def feasible(self, indices):
        return sum(self.support[i] for i in indices) <= 1

    def __call__(self, indices):
        key = tuple(sorted(indices))
        if key not in self.cache:
            total = stepfn.disjoint_sum([self.pieces[i] for i in key])
            self.cache[key] = norms.norm(total / len(key), self.d)
        return self.cache[key]


def _greedy(evaluate, count, k_max):
    """Greedy index sequence; the prefix of length k serves every k."""
    chosen = []
    for _ in range(k_max):
        best = None
        for i in range(count):
            trial = chosen + [i]
            if not evaluate.feasible(trial):
                continue
            value = evaluate(trial)
            if best is None or value.approx < best[1].approx:
                best = (i, value)
        if best is None:
            break
        chosen.append(best[0])
    return chosen


def condition33_search(X, sets, k_max, d, depth=DEFAULT_DEPTH,
                       tail_width=DEFAULT_TAIL_WIDTH,
                       exhaustive_limit=DEFAULT_EXHAUSTIVE_LIMIT,
                       uniform_samples=DEFAULT_UNIFORM_SAMPLES, rng=None):
    """Search index multisets minimizing ||(1/k) (+)_i X 1_{A_{n_i}}||.

    Candidates per k: the greedy prefix, every multiset over the last
    ``tail_width`` indices while there are at most ``exhaustive_limit`` of
    them, and ``uniform_samples`` random multisets over the same indices.
    Multisets whose supports do not fit in [0,1) are skipped.
    """
    sets = list(sets)
    _check_search_sets(sets)
    sets = sets[:depth]
    config = {'k_max': k_max, 'depth': depth, 'tail_width': tail_width,
              'exhaustive_limit': exhaustive_limit,
              'uniform_samples': uniform_samples, 'norm': d.to_json(),
              'sets': len(sets)}
    report = rep.ExperimentReport('condition33_search', config)
    with report.timed():
        evaluate = _AverageNorms([stepfn.restrict(X, A) for A in sets], d)
        count = len(sets)
        greedy = _greedy(evaluate, count, k_max)
        tail = list(range(max(count - tail_width, 0), count))
        minima = []
        for k in range(1, k_max + 1):
            candidates = []
            if len(greedy) >= k:
                candidates.append(greedy[:k])
            if tail and math.comb(k + len(tail) - 1, k) <= exhaustive_limit:
                candidates.extend(
                    list(c) for c in
                    itertools.combinations_with_replacement(tail, k))
            if rng is not None and tail:
                for _ in range(uniform_samples):
                    candidates.append([tail[int(j)] for j in
                                       rng.integers(0, len(tail), size=k)])
            best = None
            for indices in candidates:
                if not evaluate.feasible(indices):
                    continue
                value = evaluate(indices)
                if best is None or value.approx < best[1].approx:
                    best = (sorted(indices), value)
            if best is None:
                LOG.debug("No feasible multiset for k=%d" % k)
                continue
            minima.append((k, best[1]))
            report.config.setdefault('argmin', {})[str(k)] = [
                i + 1 for i in best[0]]
        report.record_profile('minimum', minima)
        if minima:
            floor = min((v for _, v in minima), key=lambda v: v.approx)
            report.record('floor', floor)
            report.record('last', minima[-1][1])
        LOG.info("condition33_search evaluated %d multisets"
                 % len(evaluate.cache))
    report.results['minima'] = minima
    return report


def probe_sets(X, refine_top=0):
    """Level sets {|X| >= alpha}, largest first, summing to at most 1."""
    levels = sorted(set(abs(v) for v in X.values if v != 0))
    sets = [stepfn.level_set(X, alpha) for alpha in levels]
    while sets and sum((A.measure for A in sets), Fraction(0)) > 1:
        sets.pop(0)
    if sets:
        top = sets[-1]
        for j in range(1, refine_top + 1):
            sets.append(top.take_measure(top.measure / 2 ** j))
    return sets


def aocea_probe(X, d, k_max, refine_top=0, **search):
    """condition33_search over the level sets of X.

    The deepest sets are kept when there are more than ``depth`` of them.
    """
    if not X.is_nonnegative():
        raise stepfn.PreconditionError("aocea_probe needs X >= 0")
    sets = probe_sets(X, refine_top)
    depth = search.pop('depth', DEFAULT_DEPTH)
    sets = sets[-depth:]
    result = condition33_search(X, sets, k_max, d, depth=depth, **search)
    result.operation = 'aocea_probe'
    return result


def descent_plateau(cfg, budget, rng, d=COUNTEREXAMPLE, generators=6,
                    restarts=span.DEFAULT_RESTARTS,
                    golden_tol=span.DEFAULT_GOLDEN_TOL):
    """Distance upper bound from Y - E[Y] to a seeded generator family.

    The family pairs Y with random segment shuffles of itself and level
    indicators with shifted copies. The result is reported, not asserted.
    """
    report = rep.ExperimentReport('descent_plateau',
                                  dict(cfg.to_json(), budget=budget,
                                       generators=generators))
    with report.timed():
        Y = build_witness(cfg)
        X = Y - Y.expectation()
        gens = []
        segments = list(Y.segments())
        levels = [stepfn.level_set(Y, v) for v in sorted(set(Y.values))
                  if v != 0]
        for j in range(generators):
            if j % 2 == 0:
                order = [int(i) for i in rng.permutation(len(segments))]
                shuffled = stepfn.StepFunction.from_segments(
                    _repack(segments[i] for i in order))
                gens.append(span.EquidistributedPair(Y, shuffled))
            else:
                L = levels[int(rng.integers(0, len(levels)))]
                room = L.complement()
                copy = room.take_measure(min(L.measure, room.measure))
                if copy.measure != L.measure:
                    continue
                gens.append(span.EquidistributedPair(
                    stepfn.StepFunction.indicator(L),
                    stepfn.StepFunction.indicator(copy)))
        seed = int(rng.integers(0, 2 ** 32))
        bound = span.distance_upper_bound(X, gens, d, budget,
                                          restarts=restarts, seed=seed,
                                          golden_tol=golden_tol)
        report.record_exploratory('distance_upper_bound', bound)
        report.record_exploratory('separation_reference', Fraction(1, 8))
    return report
