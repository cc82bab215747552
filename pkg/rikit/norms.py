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
Rearrangement-invariant norms evaluated on step functions.

Six kinds are supported: L1, Linf, Lp, Lorentz L^{p,q}, Orlicz (Luxemburg
norm) and the counterexample norm

    ||X|| = sup_n n 2^n int_0^{1/(2^n n!)} X*(t) dt.

L1, Linf and the counterexample norm are computed exactly. Lp is exact when
the p-th root happens to be rational. Lorentz and Orlicz norms are evaluated
with mpmath and carry an error bound.
"""

import logging
import math
from fractions import Fraction

import mpmath
import numpy as np

from rikit import stepfn


PRECISION = 50
DECIMAL_DIGITS = 30
RELATIVE_ERROR = mpmath.mpf(10) ** -40
ORLICZ_TOLERANCE = mpmath.mpf(10) ** -12
ORLICZ_MAX_STEPS = 4000

INFINITY = float('inf')

L1 = 'L1'
LINF = 'Linf'
LP = 'Lp'
LORENTZ = 'Lorentz'
ORLICZ = 'Orlicz'
COUNTEREXAMPLE = 'Counterexample'
KINDS = (L1, LINF, LP, LORENTZ, ORLICZ, COUNTEREXAMPLE)

LOG = logging.getLogger(__name__)


class NormError(ValueError):
    """A norm could not be evaluated."""


def set_precision():
    """Set the mpmath working precision for this process or worker."""
    if mpmath.mp.dps != PRECISION:
        mpmath.mp.dps = PRECISION


def to_mpf(value):
    """Convert an int, Fraction, float or "p/q" string to an mpf."""
    set_precision()
    if isinstance(value, str):
        value = stepfn.as_rational(value)
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def decimal(value, digits=DECIMAL_DIGITS):
    """Render a number with ``digits`` significant digits."""
    return mpmath.nstr(to_mpf(value), digits)


def _parameter(value):
    if value is None:
        return None
    if isinstance(value, str) and value.strip().lower() in ('inf', 'infinity'):
        return INFINITY
    if isinstance(value, float):
        if math.isinf(value):
            return INFINITY
        return Fraction(repr(value))
    return stepfn.as_rational(value)


class YoungFunction(object):
    """A Young function phi: [0, inf) -> [0, inf], phi(0) = 0.

    :param name: label used in JSON and reports.
    :param func: callable on mpf values, may return mpmath.inf.
    :param inverse_one: sup{u : phi(u) <= 1}, the L1 embedding constant.
    :param vectorized: optional numpy implementation used by float_norm.
    """

    def __init__(self, name, func, inverse_one, vectorized=None):
        self.name = name
        self.func = func
        self.inverse_one = inverse_one
        self.vectorized = vectorized

    def __call__(self, u):
        return self.func(u)

    def evaluate_array(self, u):
        if self.vectorized is not None:
            return self.vectorized(u)
        return np.array([float(self.func(mpmath.mpf(float(x)))) for x in u])

    def __eq__(self, other):
        if not isinstance(other, YoungFunction):
            return NotImplemented
        return self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return 'YoungFunction(%s)' % self.name


def power(p):
    """phi(u) = u^p; its Luxemburg norm is the Lp norm."""
    p = _parameter(p)
    if p < 1:
        raise stepfn.DomainError("Young power must be >= 1, got %s" % p)
    exponent = to_mpf(p)
    name = 'u^%s' % p
    return YoungFunction(name, lambda u: u ** exponent, 1,
                         lambda u: np.power(u, float(p)))


def exponential():
    """phi(u) = exp(u) - 1."""
    set_precision()
    return YoungFunction('exp(u)-1', mpmath.expm1, mpmath.log(2),
                         np.expm1)


def jump(level=1):
    """phi(u) = 0 for u <= level and infinity beyond.

    The Luxemburg norm of this Young function is ||X||_inf / level.
    """
    level = stepfn.as_rational(level)
    if level <= 0:
        raise stepfn.DomainError("Jump level must be positive")
    bound = to_mpf(level)

    def func(u):
        return mpmath.mpf(0) if u <= bound else mpmath.inf

    def vectorized(u):
        return np.where(u <= float(level), 0.0, np.inf)

    return YoungFunction('jump(%s)' % level, func, bound, vectorized)


BUILTIN_YOUNG = {
    'exp(u)-1': exponential,
}


def young_from_name(name, p=None):
    """Young function from its name; "u^p" takes the exponent from p."""
    name = name.strip()
    if name in BUILTIN_YOUNG:
        return BUILTIN_YOUNG[name]()
    if name == 'u^p':
        if p is None:
            raise stepfn.DomainError("'u^p' needs an exponent p")
        return power(p)
    if name.startswith('u^'):
        return power(name[2:])
    raise stepfn.DomainError("Unknown Young function %r; only 'u^p' and "
                             "'exp(u)-1' can be named" % name)


class NormDescriptor(object):
    """A named r.i. norm with its parameters. Immutable."""

    __slots__ = ('kind', 'p', 'q', 'phi')

    def __init__(self, kind, p=None, q=None, phi=None):
        if kind not in KINDS:
            raise stepfn.DomainError("Unknown norm kind %r" % (kind,))
        p, q = _parameter(p), _parameter(q)
        if kind == LP:
            if p is None or p == INFINITY or p < 1:
                raise stepfn.DomainError("Lp needs 1 <= p < inf, got %s" % p)
        if kind == LORENTZ:
            if p is None or p == INFINITY or p <= 1:
                raise stepfn.DomainError("Lorentz needs 1 < p < inf, got %s"
                                         % p)
            if q is None or q < 1:
                raise stepfn.DomainError("Lorentz needs 1 <= q <= inf, got "
                                         "%s" % q)
        if kind == ORLICZ and not isinstance(phi, YoungFunction):
            raise stepfn.DomainError("Orlicz needs a Young function")
        object.__setattr__(self, 'kind', kind)
        object.__setattr__(self, 'p', p)
        object.__setattr__(self, 'q', q)
        object.__setattr__(self, 'phi', phi)

    def __setattr__(self, name, value):
        raise AttributeError("NormDescriptor is immutable")

    def __reduce__(self):
        return (NormDescriptor, (self.kind, self.p, self.q, self.phi))

    @classmethod
    def l1(cls):
        return cls(L1)

    @classmethod
    def linf(cls):
        return cls(LINF)

    @classmethod
    def lp(cls, p):
        return cls(LP, p=p)

    @classmethod
    def lorentz(cls, p, q):
        return cls(LORENTZ, p=p, q=q)

    @classmethod
    def orlicz(cls, phi):
        return cls(ORLICZ, phi=phi)

    @classmethod
    def counterexample(cls):
        return cls(COUNTEREXAMPLE)

    @property
    def name(self):
        if self.kind == LP:
            return 'Lp(%s)' % self.p
        if self.kind == LORENTZ:
            return 'Lorentz(%s,%s)' % (self.p, self.q)
        if self.kind == ORLICZ:
            return 'Orlicz(%s)' % self.phi.name
        return self.kind

    def _key(self):
        return (self.kind, self.p, self.q,
                self.phi.name if self.phi is not None else None)

    def __eq__(self, other):
        if not isinstance(other, NormDescriptor):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return 'NormDescriptor(%s)' % self.name

    def to_json(self):
        data = {'kind': self.kind}
        for key in ('p', 'q'):
            value = getattr(self, key)
            if value == INFINITY:
                data[key] = 'inf'
            elif value is not None:
                data[key] = stepfn.format_rational(value)
        if self.phi is not None:
            data['phi'] = self.phi.name
        return data

    @classmethod
    def from_json(cls, data):
        kind = data.get('kind')
        lookup = dict((k.lower(), k) for k in KINDS)
        if kind is None or kind.lower() not in lookup:
            raise stepfn.DomainError("Unknown norm kind %r" % (kind,))
        phi = data.get('phi')
        if phi is not None:
            phi = young_from_name(phi, data.get('p'))
        return cls(lookup[kind.lower()], p=data.get('p'), q=data.get('q'),
                   phi=phi)


def standard_descriptors():
    """One descriptor of every kind, used by the randomized suites."""
    return [NormDescriptor.l1(),
            NormDescriptor.linf(),
            NormDescriptor.lp(2),
            NormDescriptor.lorentz(2, 3),
            NormDescriptor.orlicz(exponential()),
            NormDescriptor.counterexample()]


class NormValue(object):
    """A norm value: optional exact Fraction, mpf approximation, bound."""

    __slots__ = ('exact', 'approx', 'error_bound')

    def __init__(self, exact=None, approx=None, error_bound=None):
        if exact is not None:
            exact = stepfn.as_rational(exact)
            approx = to_mpf(exact)
            error_bound = mpmath.mpf(0)
        elif approx is None:
            raise ValueError("A norm value needs an exact or approximate "
                             "value")
        self.exact = exact
        self.approx = to_mpf(approx)
        self.error_bound = to_mpf(error_bound or 0)

    @classmethod
    def of_exact(cls, value):
        return cls(exact=value)

    def is_le(self, other, rel_tol=0):
        """self <= other, exactly when both are exact, else within
        the stated error bounds plus ``rel_tol`` relative slack.
        """
        if isinstance(other, (int, Fraction)):
            other = NormValue(exact=other)
        elif not isinstance(other, NormValue):
            other = NormValue(approx=other)
        if self.exact is not None and other.exact is not None:
            return self.exact <= other.exact
        slack = (self.error_bound + other.error_bound +
                 to_mpf(rel_tol) * max(abs(self.approx), abs(other.approx)))
        return self.approx <= other.approx + slack

    def is_close(self, other, rel_tol=0):
        return self.is_le(other, rel_tol) and other.is_le(self, rel_tol)

    def decimal(self, digits=DECIMAL_DIGITS):
        return mpmath.nstr(self.approx, digits)

    def __float__(self):
        return float(self.approx)

    def __repr__(self):
        if self.exact is not None:
            return 'NormValue(%s)' % self.exact
        return 'NormValue(~%s +- %s)' % (mpmath.nstr(self.approx, 15),
                                         mpmath.nstr(self.error_bound, 3))

    def to_json(self):
        data = {'decimal': self.decimal(),
                'error_bound': mpmath.nstr(self.error_bound, 5)}
        if self.exact is not None:
            data['exact'] = stepfn.format_rational(self.exact)
        return data


class TermProfile(object):
    """The terms n 2^n int_0^{1/(2^n n!)} X* of the counterexample norm."""

    def __init__(self, terms, cutoff):
        self.terms = list(terms)
        self.cutoff = cutoff

    def term(self, n):
        return self.terms[n - 1][1]

    def to_json(self):
        return {'cutoff': self.cutoff,
                'terms': [{'n': n, 'exact': stepfn.format_rational(v),
                           'decimal': decimal(v)} for n, v in self.terms]}


def window(n):
    """1/(2^n n!), the upper integration limit of the n-th term."""
    return Fraction(1, 2 ** n * math.factorial(n))


def _exact_root(value, p):
    """Return value^(1/p) when it is rational, else None."""
    if value < 0:
        return None

    def integer_root(n):
        if n < 2:
            return n
        x = 1 << ((n.bit_length() + p - 1) // p)
        while True:
            y = ((p - 1) * x + n // x ** (p - 1)) // p
            if y >= x:
                return x
            x = y

    num = integer_root(value.numerator)
    den = integer_root(value.denominator)
    if num ** p == value.numerator and den ** p == value.denominator:
        return Fraction(num, den)
    return None


def counterexample_cutoff(Xstar):
    """Least n with 1/(2^n n!) <= width of the top plateau of X*.

    From there on every window lies inside the top plateau, so
    term(n) = ||X||_inf / (n-1)!, which decreases for n >= 2.
    """
    plateau = Xstar.breakpoints[1]
    n = 1
    w = Fraction(1, 2)
    while w > plateau:
        n += 1
        w /= 2 * n
    return n


def _terms(Xstar, count):
    windows = [window(n) for n in range(1, count + 1)]
    integrals = stepfn.partial_integrals(Xstar, windows[::-1])[::-1]
    return [(n, n * 2 ** n * integral)
            for n, integral in zip(range(1, count + 1), integrals)]


def norm_term_profile(X, n_max):
    """Exact terms 1..n_max of the counterexample norm with the cutoff."""
    Xstar = stepfn.decreasing_rearrangement(X)
    cutoff = counterexample_cutoff(Xstar)
    return TermProfile(_terms(Xstar, n_max), cutoff)


def _counterexample(X):
    Xstar = stepfn.decreasing_rearrangement(X)
    cutoff = counterexample_cutoff(Xstar)
    terms = _terms(Xstar, cutoff)
    LOG.debug("Counterexample norm cutoff n0=%d" % cutoff)
    return max(value for _, value in terms)


def _lp(X, p):
    if p.denominator == 1:
        power_sum = sum(((b - a) * abs(v) ** p.numerator
                         for a, b, v in X.segments()), Fraction(0))
        root = _exact_root(power_sum, p.numerator)
        if root is not None:
            return NormValue(exact=root)
        value = to_mpf(power_sum) ** (1 / to_mpf(p))
    else:
        exponent = to_mpf(p)
        total = mpmath.fsum(to_mpf(b - a) * to_mpf(abs(v)) ** exponent
                            for a, b, v in X.segments() if v != 0)
        value = total ** (1 / exponent)
    return NormValue(approx=value, error_bound=RELATIVE_ERROR * value)


def _lorentz(X, p, q):
    Xstar = stepfn.decreasing_rearrangement(X)
    inv_p = 1 / to_mpf(p)
    if q == INFINITY:
        # t^{1/p} v is largest at the right end of each segment.
        value = max(to_mpf(b) ** inv_p * to_mpf(v)
                    for a, b, v in Xstar.segments())
    else:
        q_mp = to_mpf(q)
        ratio = q_mp * inv_p
        total = mpmath.fsum(
            to_mpf(v) ** q_mp / ratio *
            (to_mpf(b) ** ratio - to_mpf(a) ** ratio)
            for a, b, v in Xstar.segments() if v != 0)
        value = total ** (1 / q_mp)
    return NormValue(approx=value, error_bound=RELATIVE_ERROR * value)


def _orlicz(X, phi):
    masses = [(to_mpf(m), to_mpf(v))
              for v, m in X.distribution().absolute().items() if v != 0]
    if not masses:
        return NormValue(approx=0)

    def modular(lam):
        return mpmath.fsum(m * phi(v / lam) for m, v in masses)

    lam = to_mpf(X.sup_norm())
    lo = hi = None
    for step in range(ORLICZ_MAX_STEPS):
        value = modular(lam)
        LOG.debug("Orlicz bracket step %d: lambda=%s modular=%s"
                  % (step, mpmath.nstr(lam, 10), mpmath.nstr(value, 10)))
        if value <= 1:
            hi = lam
            if lo is not None:
                break
            lam /= 2
        else:
            lo = lam
            if hi is not None:
                break
            lam *= 2
    if lo is None or hi is None:
        raise NormError("Could not bracket the Luxemburg norm: last "
                        "lambda=%s, E[phi(|X|/lambda)]=%s"
                        % (mpmath.nstr(lam, 10), mpmath.nstr(value, 10)))
    while hi - lo > ORLICZ_TOLERANCE * hi:
        mid = (lo + hi) / 2
        if modular(mid) <= 1:
            hi = mid
        else:
            lo = mid
    return NormValue(approx=hi, error_bound=hi - lo)


def norm(X, d):
    """Evaluate ||X||_d.

    :param X: a StepFunction.
    :param d: a NormDescriptor.
    :returns: a NormValue.
    """
    if d.kind == L1:
        return NormValue(exact=abs(X).expectation())
    if d.kind == LINF:
        return NormValue(exact=X.sup_norm())
    if d.kind == COUNTEREXAMPLE:
        return NormValue(exact=_counterexample(X))
    if d.kind == LP:
        return _lp(X, d.p)
    if d.kind == LORENTZ:
        return _lorentz(X, d.p, d.q)
    return _orlicz(X, d.phi)


def l1_domination_check(X, d):
    """Return (||X||_1, ||X||_d) for the embedding check of L1."""
    return abs(X).expectation(), norm(X, d)


def l1_constant(d):
    """Constant C with ||X||_1 <= C ||X||_d for every X."""
    if d.kind == LORENTZ:
        if d.q == 1:
            return mpmath.mpf(1)
        p = to_mpf(d.p)
        if d.q == INFINITY:
            return p / (p - 1)
        q = to_mpf(d.q)
        q_conj = q / (q - 1)
        return (p / ((p - 1) * q_conj)) ** (1 / q_conj)
    if d.kind == ORLICZ:
        return to_mpf(d.phi.inverse_one)
    return Fraction(1)


def float_norm(values, widths, d):
    """Double precision ||.||_d of the step function with the given values
    on cells of the given widths. Used inside numerical searches.
    """
    values = np.abs(np.asarray(values, dtype=float))
    widths = np.asarray(widths, dtype=float)
    if d.kind == L1:
        return float(np.dot(widths, values))
    if d.kind == LINF:
        return float(values[widths > 0].max(initial=0.0))
    if d.kind == LP:
        p = float(d.p)
        return float(np.dot(widths, values ** p) ** (1.0 / p))

    order = np.argsort(-values, kind='stable')
    sorted_values = values[order]
    right = np.cumsum(widths[order])
    left = right - widths[order]
    if d.kind == LORENTZ:
        p = float(d.p)
        if d.q == INFINITY:
            return float((right ** (1.0 / p) * sorted_values).max())
        q = float(d.q)
        ratio = q / p
        total = np.sum(sorted_values ** q / ratio *
                       (right ** ratio - left ** ratio))
        return float(total ** (1.0 / q))
    if d.kind == COUNTEREXAMPLE:
        cumulative = np.concatenate(([0.0], np.cumsum(sorted_values *
                                                       widths[order])))
        points = np.concatenate(([0.0], right))
        plateau = widths[order][sorted_values == sorted_values[0]].sum()
        best = 0.0
        log_window = 0.0
        for n in range(1, 171):
            log_window -= math.log(2.0 * n)
            w = math.exp(log_window)
            best = max(best, n * 2.0 ** n * np.interp(w, points, cumulative))
            if w <= plateau:
                break
        return float(best)

    phi = d.phi
    mask = values > 0
    if not mask.any():
        return 0.0
    v, m = values[mask], widths[mask]

    def modular(lam):
        with np.errstate(over='ignore'):
            return float(np.dot(m, phi.evaluate_array(v / lam)))

    lam = float(values.max())
    lo = hi = None
    for _ in range(2000):
        if modular(lam) <= 1:
            hi = lam
            if lo is not None:
                break
            lam /= 2
        else:
            lo = lam
            if hi is not None:
                break
            lam *= 2
    if lo is None or hi is None:
        raise NormError("Could not bracket the Luxemburg norm at "
                        "lambda=%g" % lam)
    while hi - lo > 1e-12 * hi:
        mid = (lo + hi) / 2
        if modular(mid) <= 1:
            hi = mid
        else:
            lo = mid
    return hi
