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
Exact step functions on ([0,1), Lebesgue).

A random variable is rendered as a finite step function whose breakpoints
and values are Fractions. Segments are half-open, [t_{i-1}, t_i), and
adjacent segments carrying the same value are always merged, so two equal
functions have identical representations.

Nothing in this module uses floating point.
"""

import bisect
import itertools
import numbers
from fractions import Fraction


Rational = Fraction

DOMINATES = 'dominates'
DOMINATED = 'dominated'


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class PreconditionError(ValueError):
    """An operation was called on inputs violating its preconditions."""


def as_rational(value):
    """Coerce an int, a Fraction or a "p/q" string to a Fraction.

    Floats are refused: they would silently import rounding error into
    exact computations.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError("Expected an exact rational, got %r" % (value,))


def format_rational(value):
    """Render a rational as a decimal-free "p/q" string."""
    value = as_rational(value)
    return '%d/%d' % (value.numerator, value.denominator)


class IntervalSet(object):
    """A finite union of disjoint half-open subintervals of [0,1)."""

    __slots__ = ('_intervals',)

    def __init__(self, intervals=()):
        pieces = []
        for a, b in intervals:
            a, b = as_rational(a), as_rational(b)
            if a < 0 or b > 1:
                raise DomainError("Interval [%s, %s) is not inside [0,1)"
                                  % (a, b))
            if a < b:
                pieces.append((a, b))
        pieces.sort()
        merged = []
        for a, b in pieces:
            if merged and a < merged[-1][1]:
                raise PreconditionError("Intervals overlap at %s" % a)
            if merged and a == merged[-1][1]:
                merged[-1] = (merged[-1][0], b)
            else:
                merged.append((a, b))
        self._intervals = tuple(merged)

    @classmethod
    def _make(cls, intervals):
        obj = object.__new__(cls)
        obj._intervals = tuple(intervals)
        return obj

    @classmethod
    def empty(cls):
        return cls._make(())

    @classmethod
    def full(cls):
        return cls._make(((Fraction(0), Fraction(1)),))

    @classmethod
    def interval(cls, a, b):
        return cls([(a, b)])

    @property
    def intervals(self):
        return self._intervals

    @property
    def measure(self):
        return sum((b - a for a, b in self._intervals), Fraction(0))

    def __iter__(self):
        return iter(self._intervals)

    def __len__(self):
        return len(self._intervals)

    def __bool__(self):
        return bool(self._intervals)

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._intervals == other._intervals

    def __hash__(self):
        return hash(self._intervals)

    def __repr__(self):
        return 'IntervalSet(%s)' % ', '.join(
            '[%s, %s)' % (a, b) for a, b in self._intervals)

    def contains(self, t):
        t = as_rational(t)
        for a, b in self._intervals:
            if a <= t < b:
                return True
        return False

    def union(self, other):
        merged = []
        for a, b in sorted(self._intervals + other._intervals):
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(b, merged[-1][1]))
            else:
                merged.append((a, b))
        return IntervalSet._make(merged)

    def intersection(self, other):
        out = []
        i = j = 0
        mine, theirs = self._intervals, other._intervals
        while i < len(mine) and j < len(theirs):
            a = max(mine[i][0], theirs[j][0])
            b = min(mine[i][1], theirs[j][1])
            if a < b:
                out.append((a, b))
            if mine[i][1] < theirs[j][1]:
                i += 1
            else:
                j += 1
        return IntervalSet(out)

    def complement(self):
        gaps = []
        start = Fraction(0)
        for a, b in self._intervals:
            if start < a:
                gaps.append((start, a))
            start = b
        if start < 1:
            gaps.append((start, Fraction(1)))
        return IntervalSet._make(gaps)

    def difference(self, other):
        return self.intersection(other.complement())

    def issubset(self, other):
        return not self.difference(other)

    def take_measure(self, mu):
        """Return the leftmost subset of this set with measure ``mu``."""
        mu = as_rational(mu)
        if mu < 0 or mu > self.measure:
            raise PreconditionError("Cannot take measure %s from a set of "
                                    "measure %s" % (mu, self.measure))
        out = []
        for a, b in self._intervals:
            if mu <= 0:
                break
            take = min(b - a, mu)
            out.append((a, a + take))
            mu -= take
        return IntervalSet(out)

    def to_json(self):
        return [{'t0': format_rational(a), 't1': format_rational(b)}
                for a, b in self._intervals]

    @classmethod
    def from_json(cls, data):
        return cls([(item['t0'], item['t1']) for item in data])


def _canonical(breakpoints, values):
    """Merge adjacent segments holding equal values."""
    bps = [breakpoints[0]]
    vals = []
    for b, v in zip(breakpoints[1:], values):
        if vals and vals[-1] == v:
            bps[-1] = b
        else:
            vals.append(v)
            bps.append(b)
    return tuple(bps), tuple(vals)


class StepFunction(object):
    """A piecewise-constant function on [0,1) with rational data.

    Value ``values[i]`` is held on ``[breakpoints[i], breakpoints[i+1])``.
    Instances are immutable.
    """

    __slots__ = ('_breakpoints', '_values')

    def __init__(self, breakpoints, values):
        bps = tuple(as_rational(t) for t in breakpoints)
        vals = tuple(as_rational(v) for v in values)
        if len(bps) < 2 or bps[0] != 0 or bps[-1] != 1:
            raise DomainError("Breakpoints must run from 0 to 1")
        if len(vals) != len(bps) - 1:
            raise DomainError("Expected %d values, got %d"
                              % (len(bps) - 1, len(vals)))
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise DomainError("Breakpoints must be strictly increasing")
        self._breakpoints, self._values = _canonical(bps, vals)

    @classmethod
    def _build(cls, breakpoints, values):
        obj = object.__new__(cls)
        obj._breakpoints, obj._values = _canonical(breakpoints, values)
        return obj

    @classmethod
    def constant(cls, c):
        return cls._build((Fraction(0), Fraction(1)), (as_rational(c),))

    @classmethod
    def zero(cls):
        return cls.constant(0)

    @classmethod
    def from_segments(cls, segments):
        """Build from contiguous (t0, t1, v) triples covering [0,1)."""
        segments = list(segments)
        if not segments:
            raise DomainError("At least one segment is required")
        bps = [segments[0][0]] + [s[1] for s in segments]
        for (_, b, _), (a, _, _) in zip(segments, segments[1:]):
            if as_rational(a) != as_rational(b):
                raise DomainError("Segments are not contiguous at %s" % b)
        return cls(bps, [s[2] for s in segments])

    @classmethod
    def from_pieces(cls, pieces):
        """Build from disjoint (t0, t1, v) triples; gaps hold zero."""
        pieces = sorted((as_rational(a), as_rational(b), as_rational(v))
                        for a, b, v in pieces)
        bps = [Fraction(0)]
        vals = []
        for a, b, v in pieces:
            if a >= b:
                continue
            if a < bps[-1] or b > 1:
                raise PreconditionError("Pieces overlap or leave [0,1) "
                                        "near %s" % a)
            if a > bps[-1]:
                vals.append(Fraction(0))
                bps.append(a)
            vals.append(v)
            bps.append(b)
        if bps[-1] < 1:
            vals.append(Fraction(0))
            bps.append(Fraction(1))
        return cls._build(bps, vals)

    @classmethod
    def indicator(cls, A, value=1):
        value = as_rational(value)
        return cls.from_pieces((a, b, value) for a, b in A)

    @property
    def breakpoints(self):
        return self._breakpoints

    @property
    def values(self):
        return self._values

    def segments(self):
        return zip(self._breakpoints, self._breakpoints[1:], self._values)

    def __len__(self):
        return len(self._values)

    def __call__(self, t):
        t = as_rational(t)
        if not 0 <= t < 1:
            raise DomainError("Point %s is outside [0,1)" % t)
        return self._values[bisect.bisect_right(self._breakpoints, t) - 1]

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return (self._breakpoints == other._breakpoints and
                self._values == other._values)

    def __hash__(self):
        return hash((self._breakpoints, self._values))

    def __repr__(self):
        return 'StepFunction(%s)' % ', '.join(
            '[%s, %s): %s' % seg for seg in self.segments())

    def _combine(self, other, op):
        if isinstance(other, numbers.Rational):
            other = StepFunction.constant(other)
        if not isinstance(other, StepFunction):
            return NotImplemented
        bps = [Fraction(0)]
        vals = []
        for a, b, (x, y) in _refine((self, other)):
            bps.append(b)
            vals.append(op(x, y))
        return StepFunction._build(bps, vals)

    def map(self, func):
        """Apply ``func`` to every value."""
        return StepFunction._build(self._breakpoints,
                                   [func(v) for v in self._values])

    def __add__(self, other):
        return self._combine(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._combine(other, lambda x, y: y - x)

    def __mul__(self, other):
        if isinstance(other, numbers.Rational):
            c = as_rational(other)
            return self.map(lambda v: v * c)
        return self._combine(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = as_rational(other)
        return self.map(lambda v: v / c)

    def __neg__(self):
        return self.map(lambda v: -v)

    def __abs__(self):
        return self.map(abs)

    def positive_part(self):
        return self.map(lambda v: max(v, 0))

    def negative_part(self):
        return self.map(lambda v: max(-v, 0))

    def maximum(self, other):
        return self._combine(other, max)

    def minimum(self, other):
        return self._combine(other, min)

    def expectation(self):
        return sum(((b - a) * v for a, b, v in self.segments()), Fraction(0))

    def sup_norm(self):
        return max(abs(v) for v in self._values)

    def support(self):
        """The set {X != 0}."""
        return IntervalSet((a, b) for a, b, v in self.segments() if v != 0)

    def support_measure(self):
        return sum((b - a for a, b, v in self.segments() if v != 0),
                   Fraction(0))

    def is_nonnegative(self):
        return all(v >= 0 for v in self._values)

    def is_nonincreasing(self):
        return all(x >= y for x, y in zip(self._values, self._values[1:]))

    def dominates(self, other):
        """True iff self >= other pointwise."""
        return all(x >= y for _, _, (x, y) in _refine((self, other)))

    def distribution(self):
        return Distribution.of(self)

    def to_json(self):
        return [{'t0': format_rational(a), 't1': format_rational(b),
                 'v': format_rational(v)} for a, b, v in self.segments()]

    @classmethod
    def from_json(cls, data):
        return cls.from_segments((item['t0'], item['t1'], item['v'])
                                 for item in data)


class Distribution(object):
    """Value to mass map of a step function; masses sum to exactly 1."""

    __slots__ = ('_masses',)

    def __init__(self, masses):
        items = sorted((as_rational(v), as_rational(m))
                       for v, m in dict(masses).items())
        if any(m <= 0 for _, m in items):
            raise DomainError("Masses must be positive")
        if sum(m for _, m in items) != 1:
            raise DomainError("Masses must sum to 1")
        self._masses = tuple(items)

    @classmethod
    def of(cls, X):
        masses = {}
        for a, b, v in X.segments():
            masses[v] = masses.get(v, Fraction(0)) + (b - a)
        return cls(masses)

    def items(self):
        return self._masses

    def mass(self, value):
        return dict(self._masses).get(as_rational(value), Fraction(0))

    def absolute(self):
        masses = {}
        for v, m in self._masses:
            masses[abs(v)] = masses.get(abs(v), Fraction(0)) + m
        return Distribution(masses)

    def __eq__(self, other):
        if not isinstance(other, Distribution):
            return NotImplemented
        return self._masses == other._masses

    def __hash__(self):
        return hash(self._masses)

    def __repr__(self):
        return 'Distribution({%s})' % ', '.join(
            '%s: %s' % item for item in self._masses)


def _refine(functions):
    """Yield (t0, t1, values) over the common refinement of functions."""
    points = sorted(set(itertools.chain.from_iterable(
        f.breakpoints for f in functions)))
    cursors = [0] * len(functions)
    for a, b in zip(points, points[1:]):
        row = []
        for j, f in enumerate(functions):
            while f.breakpoints[cursors[j] + 1] <= a:
                cursors[j] += 1
            row.append(f.values[cursors[j]])
        yield a, b, row


def common_partition(functions):
    """List the cells of the common refinement of ``functions``."""
    return list(_refine(functions))


def _clip(X, A):
    """Yield the segments of X cut down to the intervals of A, in order."""
    bps = X.breakpoints
    for a, b in A:
        i = bisect.bisect_right(bps, a) - 1
        while i < len(X) and bps[i] < b:
            lo, hi = max(a, bps[i]), min(b, bps[i + 1])
            if lo < hi:
                yield lo, hi, X.values[i]
            i += 1


def decreasing_rearrangement(X):
    """Return X*, the segments of |X| sorted by value and packed from 0.

    Ties are broken by the original left endpoint so the result is
    deterministic.
    """
    ordered = sorted(((abs(v), a, b) for a, b, v in X.segments()),
                     key=lambda seg: (-seg[0], seg[1]))
    bps = [Fraction(0)]
    vals = []
    for v, a, b in ordered:
        bps.append(bps[-1] + (b - a))
        vals.append(v)
    return StepFunction._build(bps, vals)


def same_distribution(X, Y, absolute=False):
    """X ~ Y. With ``absolute`` the distributions of |X| and |Y| are
    compared instead, which is the notion norms are invariant under.
    """
    dx, dy = X.distribution(), Y.distribution()
    if absolute:
        return dx.absolute() == dy.absolute()
    return dx == dy


def partial_integral(X, s):
    """Exact integral of X over [0, s)."""
    s = as_rational(s)
    if not 0 <= s <= 1:
        raise DomainError("Upper limit %s is outside [0,1]" % s)
    total = Fraction(0)
    for a, b, v in X.segments():
        if a >= s:
            break
        total += (min(b, s) - a) * v
    return total


def partial_integrals(X, points):
    """Evaluate partial_integral(X, s) for every s of a sorted sequence."""
    out = []
    segments = list(X.segments())
    i = 0
    acc = Fraction(0)
    for s in points:
        s = as_rational(s)
        if not 0 <= s <= 1:
            raise DomainError("Upper limit %s is outside [0,1]" % s)
        while i < len(segments) and segments[i][1] <= s:
            a, b, v = segments[i]
            acc += (b - a) * v
            i += 1
        partial = acc
        if i < len(segments) and segments[i][0] < s:
            partial += (s - segments[i][0]) * segments[i][2]
        out.append(partial)
    return out


def restrict(X, A):
    """X * 1_A."""
    return StepFunction.from_pieces(_clip(X, A))


def values_on(X, A):
    """Distinct values X takes on A, ignoring null sets."""
    return sorted(set(v for _, _, v in _clip(X, A)))


def level_set(X, c):
    """The set {|X| >= c}."""
    c = as_rational(c)
    return IntervalSet((a, b) for a, b, v in X.segments() if abs(v) >= c)


def disjoint_sum(Xs):
    """Canonical representative of the disjoint sum of ``Xs``.

    The nonzero segments of each summand are packed left to right, so the
    summands occupy disjoint stretches of [0,1).
    """
    Xs = list(Xs)
    total = sum((X.support_measure() for X in Xs), Fraction(0))
    if total > 1:
        raise PreconditionError("Supports have total measure %s > 1"
                                % total)
    pieces = []
    t = Fraction(0)
    for X in Xs:
        for a, b, v in X.segments():
            if v != 0:
                pieces.append((t, t + (b - a), v))
                t += b - a
    return StepFunction.from_pieces(pieces)


def transport(X, source, target):
    """Move the values of X on ``source`` onto ``target``.

    The map is the order-preserving, measure-preserving bijection between
    the two sets, so the result restricted to ``target`` is equidistributed
    with X restricted to ``source``. The result is zero off ``target``.
    """
    if source.measure != target.measure:
        raise PreconditionError("Source measure %s differs from target "
                                "measure %s" % (source.measure,
                                                target.measure))
    slots = list(target)
    pieces = []
    if not slots:
        return StepFunction.zero()
    k = 0
    pos, end = slots[0]
    for a, b, v in _clip(X, source):
        length = b - a
        while length > 0:
            take = min(end - pos, length)
            if v != 0:
                pieces.append((pos, pos + take, v))
            pos += take
            length -= take
            if pos == end and k + 1 < len(slots):
                k += 1
                pos, end = slots[k]
    return StepFunction.from_pieces(pieces)


def rank_coupling(Xp, X1, X2, direction=DOMINATES):
    """Return X2' with X2' ~ X2 and Xp >= X2' (or Xp <= X2').

    Requires Xp ~ X1 and X1 >= X2 (resp. X1 <= X2). The cells of the common
    partition of X1 and X2 are sorted by the value of X1, the segments of
    Xp by their own value; both sorted profiles describe the same quantile
    function, so walking them side by side aligns equal X1 and Xp values.
    X2's value on each aligned mass slice is carried onto Xp's slice.
    """
    if direction not in (DOMINATES, DOMINATED):
        raise DomainError("Unknown direction %r" % (direction,))
    if not same_distribution(Xp, X1):
        raise PreconditionError("Xp and X1 are not equidistributed")
    if direction == DOMINATES and not X1.dominates(X2):
        raise PreconditionError("X1 >= X2 does not hold pointwise")
    if direction == DOMINATED and not X2.dominates(X1):
        raise PreconditionError("X1 <= X2 does not hold pointwise")

    cells = sorted(((x1, a, b, x2) for a, b, (x1, x2) in _refine((X1, X2))),
                   key=lambda cell: (cell[0], cell[1]))
    slots = sorted(((v, a, b) for a, b, v in Xp.segments()),
                   key=lambda slot: (slot[0], slot[1]))
    pieces = []
    k = 0
    _, pos, end = slots[0]
    for _, a, b, x2 in cells:
        length = b - a
        while length > 0:
            take = min(end - pos, length)
            pieces.append((pos, pos + take, x2))
            pos += take
            length -= take
            if pos == end and k + 1 < len(slots):
                k += 1
                _, pos, end = slots[k]
    return StepFunction.from_pieces(pieces)
