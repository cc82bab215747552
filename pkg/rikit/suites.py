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
Verification suites behind the command line.

Each suite returns one ExperimentReport. Randomized families draw instance
i from generators.instance_rng(seed, family, i), run the instances on a
thread pool of RIKIT_THREADS workers and merge the per-instance reports in
index order, so the merged report does not depend on the thread count.
"""

import logging
import math
import os
from concurrent import futures
from fractions import Fraction

from rikit import counterexample
from rikit import generators
from rikit import majorization
from rikit import norms
from rikit import report as rep
from rikit import span
from rikit import stepfn


LOG = logging.getLogger(__name__)

FLOAT_TOL = Fraction(1, 10 ** 9)
DISTANCE_TOL = 1e-6
L2_CONTRAST = Fraction(1, 20)
FLOOR = Fraction(2, 5)
GROWTH_N = 6
DESCENT_BUDGET = 40
ORACLE_BUDGET = 400

ONE = stepfn.StepFunction.constant(1)
L2 = norms.NormDescriptor.lp(2)

SEARCH_KEYS = ('depth', 'tail_width', 'exhaustive_limit', 'uniform_samples')


def thread_count():
    """Worker count from RIKIT_THREADS, at least 1."""
    try:
        return max(1, int(os.environ.get('RIKIT_THREADS', 1)))
    except ValueError:
        LOG.warning("Ignoring invalid RIKIT_THREADS=%s"
                    % os.environ.get('RIKIT_THREADS'))
        return 1


def parallel_map(func, items, threads=None):
    """map() over a thread pool; results keep the order of ``items``."""
    items = list(items)
    threads = threads or thread_count()
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    norms.set_precision()
    with futures.ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def run_family(family, check, seed, instances, threads=None):
    """Run ``check(rng)`` on ``instances`` seeded generators and merge."""
    report = rep.ExperimentReport(family, {'instances': instances}, seed)
    with report.timed():
        rngs = [generators.instance_rng(seed, family, i)
                for i in range(instances)]
        for i, sub in enumerate(parallel_map(check, rngs, threads)):
            report.merge(sub, str(i))
    LOG.info("%s: %d/%d assertions passed"
             % (family, report.count(), len(report.assertions)))
    return report


def scale(value, c):
    """c * value as a NormValue, exact when both factors are."""
    if value.exact is not None and isinstance(c, (int, Fraction)):
        return norms.NormValue(exact=value.exact * c)
    c = norms.to_mpf(c)
    return norms.NormValue(approx=value.approx * c,
                           error_bound=value.error_bound * abs(c))


def _search_settings(settings):
    return dict((key, settings[key]) for key in SEARCH_KEYS
                if key in settings)


def check_majorization(rng):
    """One instance of the disjoint-average majorization lemma."""
    k = int(rng.integers(1, 5))
    X = generators.random_small_support(rng, k)
    shuffles = [generators.random_shuffle(X, rng) for _ in range(k)]
    w = generators.random_weights(rng, k)
    report = rep.ExperimentReport('majorization', {'k': k})
    report.check('prec', majorization.check_majorization_lemma(X, shuffles,
                                                                w))
    return report


def check_disjoint_sums(rng):
    """Norm comparison of disjoint sums plus its coupling trace."""
    k = int(rng.integers(1, 5))
    X, A, As = generators.random_another_instance(rng, k)
    report = rep.ExperimentReport('disjoint_sums',
                                  {'k': k, 'measure_A':
                                   stepfn.format_rational(A.measure)})
    for d in norms.standard_descriptors():
        left, right = majorization.check_lemma_another(X, A, As, k, d)
        report.check_le(d.name, left, right, rel_tol=FLOAT_TOL)

    trace = majorization.lemma_another_coupling(X, A, As)
    absX = abs(X)
    XA = stepfn.restrict(absX, A)
    for i, Ai in enumerate(As):
        piece = stepfn.restrict(absX, Ai)
        report.check('Z_%d_equidistributed' % i,
                     stepfn.same_distribution(trace.Z[i], piece))
        report.check('Z_%d_le_XA' % i, XA.dominates(trace.Z[i]))
        report.check('U_%d_equidistributed' % i,
                     stepfn.same_distribution(trace.U[i], XA))
        report.check('V_%d_le_U' % i, trace.U[i].dominates(trace.V[i]))
        report.check('V_%d_equidistributed' % i,
                     stepfn.same_distribution(trace.V[i], trace.Z[i]))
    report.check('left_is_disjoint_sum', stepfn.same_distribution(
        trace.left(),
        stepfn.disjoint_sum([stepfn.restrict(absX, Ai) for Ai in As])))
    report.check('right_is_disjoint_sum', stepfn.same_distribution(
        trace.right(), stepfn.disjoint_sum([XA] * k)))
    return report


def check_residuals(rng):
    """Residual bound of the set decomposition and exactness on n/m."""
    m = int(rng.integers(3, 13))
    A = generators.random_interval_set(rng)
    report = rep.ExperimentReport('residuals', {'m': m})
    decomposition = span.general_set_decomposition(A, m)
    report.check('reconstruction', decomposition.verify())
    report.check('target_is_centered_indicator',
                 decomposition.target ==
                 stepfn.StepFunction.indicator(A) - A.measure)
    for d in norms.standard_descriptors():
        bound = scale(norms.norm(ONE, d), Fraction(2, m))
        report.check_le('residual_%s' % d.name,
                        decomposition.residual_norm(d), bound,
                        rel_tol=FLOAT_TOL)

    n = int(rng.integers(1, m))
    start = Fraction(int(rng.integers(0, m - n + 1)), m)
    B = stepfn.IntervalSet.interval(start, start + Fraction(n, m))
    exact = span.rational_measure_decomposition(B, m)
    report.check('rational_reconstruction', exact.verify())
    report.check('rational_residual_zero',
                 exact.residual == stepfn.StepFunction.zero())
    return report


def check_growth(rng):
    """Single-step and three-round growth on generated instances."""
    m = int(rng.integers(1, 4))
    report = rep.ExperimentReport('growth', {'m': m, 'n': GROWTH_N})
    single = counterexample.generate_growth_instance(rng, m=m, n=GROWTH_N)
    _, single_report = counterexample.lemma41_construct(single)
    report.merge(single_report, 'single')
    iterated = counterexample.generate_growth_instance(rng, m=m, n=GROWTH_N,
                                                       k=3)
    _, iterated_report = counterexample.lemma42_iterate(iterated)
    report.merge(iterated_report, 'iterated')
    return report


def check_collapse(rng):
    """Witness for a non-constant kernel, collapse for a constant one."""
    report = rep.ExperimentReport('collapse')
    Y = generators.random_step_function(rng)
    if len(Y) == 1:
        Y = Y + stepfn.StepFunction.indicator(
            stepfn.IntervalSet.interval(0, Fraction(1, 2)))
    f = span.RepresentedFunctional(Y)
    witness = span.law_invariance_witness(f)
    report.check('witness_found', witness is not None)
    if witness is not None:
        A, B = witness
        report.check_eq('witness_measures_equal', A.measure, B.measure)
        lhs = f(stepfn.StepFunction.indicator(A))
        rhs = f(stepfn.StepFunction.indicator(B))
        report.check('witness_expectations_differ', lhs != rhs, lhs, rhs)

    c = int(rng.integers(0, 6))
    constant = span.RepresentedFunctional(stepfn.StepFunction.constant(c))
    report.check('constant_has_no_witness',
                 span.law_invariance_witness(constant) is None)
    X = generators.random_nonnegative(rng)
    report.check('collapses', span.collapse_check(constant, X))
    previous = None
    for level in sorted(set(X.values)) + [X.sup_norm() + 1]:
        truncated = X - stepfn.restrict(X, stepfn.level_set(X, level))
        value = constant(truncated)
        report.check_eq('truncation_%s_collapses' % level, value,
                        c * truncated.expectation())
        if previous is not None:
            report.check_le('truncation_%s_increases' % level, previous,
                            value)
        previous = value
    report.check_eq('truncations_reach_mean', previous, c * X.expectation())

    X = generators.random_nonnegative(rng)
    positive = span.positive_part_functional(f)
    value = span.pairing(positive, X)
    oracle = sum(((b - a) * x * max(y, 0) for a, b, (x, y) in
                  stepfn.common_partition([X, Y])), Fraction(0))
    report.check_eq('positive_part_sign_rule', value, oracle)
    weights = generators.random_step_function(rng, low=0, high=4) / 4
    report.check_le('positive_part_dominates', f(X * weights), value)
    return report


def check_oracles(rng):
    """Orlicz(u^p) against Lp, descent against least squares in L2."""
    report = rep.ExperimentReport('oracles')
    p = (1, Fraction(3, 2), 2, 3)[int(rng.integers(0, 4))]
    X = generators.random_step_function(rng)
    lp = norms.norm(X, norms.NormDescriptor.lp(p))
    orlicz = norms.norm(X, norms.NormDescriptor.orlicz(norms.power(p)))
    report.check('orlicz_power_%s_matches_lp' % p,
                 orlicz.is_close(lp, FLOAT_TOL), orlicz, lp)

    X = generators.random_step_function(rng, low=1, high=11)
    gens = []
    for _ in range(2):
        G = generators.random_step_function(rng)
        gens.append(span.EquidistributedPair(
            G, generators.shuffle_segments(G, rng)))
    seed = int(rng.integers(0, 2 ** 32))
    upper = span.distance_upper_bound(X, gens, L2, ORACLE_BUDGET, seed=seed)
    oracle = span.l2_projection_distance(X, gens)
    report.check('descent_matches_projection',
                 abs(float(upper) - oracle) <= DISTANCE_TOL * oracle,
                 float(upper), oracle)
    return report


FAMILIES = (
    ('majorization', check_majorization),
    ('disjoint_sums', check_disjoint_sums),
    ('residuals', check_residuals),
    ('growth', check_growth),
    ('collapse', check_collapse),
    ('oracles', check_oracles),
)


def property_suite(seed=0, instances=100, threads=None):
    """Every randomized lemma family with ``instances`` instances each."""
    report = rep.ExperimentReport('property-suite',
                                  {'instances': instances}, seed)
    with report.timed():
        for family, check in FAMILIES:
            report.merge(run_family(family, check, seed, instances,
                                    threads), family)
    return report


def tail_norms(n_max):
    """Tails of the witness: bounded below in the counterexample norm,
    vanishing in L1.
    """
    report = rep.ExperimentReport('tail_norms', {'n_max': n_max})
    Y = counterexample.build_witness(counterexample.WitnessConfig(n_max))
    L1 = norms.NormDescriptor.l1()
    top = min(18, n_max - 1)
    kept, dropped = [], []
    for m in range(1, top + 1):
        value = counterexample.tail_norm(Y, math.factorial(m),
                                         counterexample.COUNTEREXAMPLE)
        report.check_le('tail_%d_ge_3_4' % m, Fraction(3, 4), value)
        report.check_le('tail_%d_ge_bound' % m, Fraction(m, m + 1), value)
        kept.append((m, value))
        dropped.append((m, counterexample.tail_norm(
            Y, math.factorial(m), L1).exact))
    for m in range(2, n_max - 1):
        value = counterexample.tail_norm(Y, math.factorial(m) + 1,
                                         counterexample.COUNTEREXAMPLE)
        report.check_le('tail_above_%d_ge_bound' % m,
                        Fraction(m + 2, m + 3), value)
    for (m, previous), (_, current) in zip(dropped, dropped[1:]):
        report.check_le('l1_tail_%d_decreases' % (m + 1), current, previous)
    if top >= 8:
        report.check_lt('l1_tail_below_1e-3', dropped[-1][1],
                        Fraction(1, 1000))
    report.record_profile('counterexample', kept)
    report.record_profile('l1', dropped)
    return report


def truncation_limits(n_max):
    """E[Y 1_{Y<c}] and ||Y 1_{Y<c}|| increase to E[Y] and ||Y||."""
    report = rep.ExperimentReport('truncation_limits', {'n_max': n_max})
    Y = counterexample.build_witness(counterexample.WitnessConfig(n_max))
    previous = None
    for n in range(3, n_max + 2):
        truncated = Y - stepfn.restrict(
            Y, stepfn.level_set(Y, math.factorial(n)))
        current = (truncated.expectation(),
                   norms.norm(truncated, counterexample.COUNTEREXAMPLE).exact)
        if previous is not None:
            report.check_le('mean_%d_increases' % n, previous[0], current[0])
            report.check_le('norm_%d_increases' % n, previous[1], current[1])
        previous = current
    report.check_eq('mean_limit', previous[0], Y.expectation())
    report.check_eq('norm_limit', previous[1],
                    norms.norm(Y, counterexample.COUNTEREXAMPLE).exact)
    return report


def verify_counterexample(n_max=20, seed=0, k=3, m=2):
    """Every exact verification of the witness."""
    report = rep.ExperimentReport('verify-counterexample',
                                  {'n_max': n_max, 'k': k, 'm': m}, seed)
    with report.timed():
        for truncation in counterexample.TRUNCATIONS:
            cfg = counterexample.WitnessConfig(n_max, truncation)
            report.merge(counterexample.verify_witness_mean(cfg),
                         'mean.%s' % truncation)
            report.merge(counterexample.verify_witness_norm(cfg),
                         'norm.%s' % truncation)
        report.merge(tail_norms(n_max), 'tails')
        report.merge(truncation_limits(n_max), 'truncation_limits')
        rng = generators.instance_rng(seed, 'growth_demo', 0)
        report.merge(counterexample.growth_demo(rng, k=k, m=m),
                     'growth_demo')
    return report


def _floor(search):
    minima = search.results.get('minima', [])
    if not minima:
        return None
    return min((value for _, value in minima), key=lambda v: v.approx)


def aocea_search(n_max=20, d=counterexample.COUNTEREXAMPLE,
                 k_max=counterexample.DEFAULT_K_MAX, seed=0, settings=None):
    """Averaging searches on the witness, contrasted with L2 on a bounded
    function where the averages vanish.
    """
    settings = _search_settings(settings or {})
    depth = settings.get('depth', counterexample.DEFAULT_DEPTH)
    report = rep.ExperimentReport('aocea-search',
                                  dict(settings, n_max=n_max, k_max=k_max,
                                       norm=d.to_json()), seed)
    with report.timed():
        Y = counterexample.build_witness(counterexample.WitnessConfig(n_max))
        sets = [stepfn.IntervalSet.interval(0, counterexample.c_value(n))
                for n in range(3, 3 + depth)]
        rng = generators.instance_rng(seed, 'aocea-search', 0)
        searches = [
            ('witness_sets', counterexample.condition33_search(
                Y, sets, k_max, d, rng=rng, **settings)),
            ('witness_levels', counterexample.aocea_probe(
                Y, d, k_max, rng=rng, **settings)),
        ]
        for name, search in searches:
            report.merge(search, name)
            floor = _floor(search)
            if d.kind == norms.COUNTEREXAMPLE:
                report.check('%s.searched' % name, floor is not None)
                if floor is not None:
                    report.check_le('%s.floor_ge_2_5' % name, FLOOR, floor)

        bounded = counterexample.build_witness(
            counterexample.WitnessConfig(n_max, counterexample.CAP))
        contrast = counterexample.aocea_probe(bounded, L2, k_max,
                                              refine_top=depth, rng=rng,
                                              **settings)
        report.merge(contrast, 'bounded_l2')
        floor = _floor(contrast)
        report.check('bounded_l2.searched', floor is not None)
        if floor is not None:
            report.check_le('bounded_l2.floor_small', floor,
                            scale(norms.norm(bounded, L2), L2_CONTRAST),
                            rel_tol=FLOAT_TOL)
    return report


def span_distance(m=7, n_max=20, budget=DESCENT_BUDGET, seed=0,
                  instances=20, threads=None, settings=None):
    """Decomposition examples, residual decay and the descent report."""
    settings = settings or {}
    budget = settings.get('budget', budget)
    restarts = settings.get('restarts', span.DEFAULT_RESTARTS)
    golden_tol = settings.get('golden_tol', span.DEFAULT_GOLDEN_TOL)
    report = rep.ExperimentReport('span-distance',
                                  {'m': m, 'n_max': n_max, 'budget': budget,
                                   'restarts': restarts}, seed)
    descriptors = norms.standard_descriptors()
    with report.timed():
        third = span.smallcom_decomposition(
            stepfn.IntervalSet.interval(0, Fraction(1, 3)), 3)
        report.check('third_reconstruction', third.verify())
        report.check('third_residual_zero',
                     third.residual == stepfn.StepFunction.zero())

        ninth = span.smallcom_decomposition(
            stepfn.IntervalSet.interval(0, Fraction(1, 9)), 7)
        report.check('ninth_reconstruction', ninth.verify())
        for d in descriptors:
            report.check_le('ninth_residual_%s' % d.name,
                            ninth.residual_norm(d),
                            scale(norms.norm(ONE, d), Fraction(2, 7)),
                            rel_tol=FLOAT_TOL)

        A = stepfn.IntervalSet.interval(0, Fraction(501, 1000))
        for d in (norms.NormDescriptor.l1(), counterexample.COUNTEREXAMPLE):
            coarse = span.general_set_decomposition(A, 3).residual_norm(d)
            fine = span.general_set_decomposition(A, 300).residual_norm(d)
            report.record('residual_m3_%s' % d.name, coarse)
            report.record('residual_m300_%s' % d.name, fine)
            report.check_lt('residual_decay_%s' % d.name, 50 * fine.exact,
                            coarse.exact)
        own = span.general_set_decomposition(A, max(m, 3))
        report.check('general_reconstruction', own.verify())
        for d in descriptors:
            report.check_le('general_residual_%s' % d.name,
                            own.residual_norm(d),
                            scale(norms.norm(ONE, d),
                                  Fraction(2, max(m, 3))),
                            rel_tol=FLOAT_TOL)

        Y = counterexample.build_witness(counterexample.WitnessConfig(n_max))
        simple = span.simple_function_decomposition(Y, m)
        report.check('witness_reconstruction', simple.verify())
        report.record('witness_residual_L1',
                      simple.residual_norm(norms.NormDescriptor.l1()))

        rng = generators.instance_rng(seed, 'descent_plateau', 0)
        report.merge(counterexample.descent_plateau(
            counterexample.WitnessConfig(n_max), budget, rng,
            restarts=restarts, golden_tol=golden_tol), 'descent')
        report.merge(run_family('l2_oracle', check_oracles, seed, instances,
                                threads), 'l2_oracle')
    return report


def evaluate_norm(X, d, seed=0):
    """||X||_d with the L1 embedding check."""
    report = rep.ExperimentReport('norm', {'norm': d.to_json(),
                                           'segments': len(X)}, seed)
    with report.timed():
        value = norms.norm(X, d)
        report.record('norm', value)
        l1, _ = norms.l1_domination_check(X, d)
        report.record('l1', l1)
        report.check_le('l1_embedding', l1,
                        scale(value, norms.l1_constant(d)),
                        rel_tol=FLOAT_TOL)
        if d.kind == norms.COUNTEREXAMPLE:
            cutoff = norms.counterexample_cutoff(
                stepfn.decreasing_rearrangement(X))
            report.record_profile('terms',
                                  norms.norm_term_profile(X, cutoff).terms)
    return report
