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

"""Structured results of verification and search runs."""

import collections
import contextlib
import csv
import io
import json
import logging
import time
from fractions import Fraction

from rikit import norms
from rikit import stepfn


LOG = logging.getLogger(__name__)

PASS = 'pass'
FAIL = 'fail'
CSV_HEADER = ('report', 'series', 'n', 'exact', 'decimal')


def render(value):
    """Render a value for the lhs/rhs fields of an assertion."""
    if isinstance(value, norms.NormValue):
        if value.exact is not None:
            return stepfn.format_rational(value.exact)
        return value.decimal()
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return stepfn.format_rational(value)
    if isinstance(value, float):
        return norms.decimal(value)
    return str(value)


class ExperimentReport(object):
    """Inputs, exact values, assertions and timing of one run."""

    def __init__(self, operation, config=None, seed=None):
        self.operation = operation
        self.config = dict(config or {})
        self.seed = seed
        self.exact_values = collections.OrderedDict()
        self.decimal_renderings = collections.OrderedDict()
        self.exploratory = collections.OrderedDict()
        self.assertions = []
        self.profiles = collections.OrderedDict()
        self.runtime_ms = 0
        # In-memory values for callers; never serialized.
        self.results = {}

    def record(self, name, value):
        """Record an exact Fraction or a NormValue under ``name``."""
        if isinstance(value, norms.NormValue):
            if value.exact is not None:
                self.exact_values[name] = stepfn.format_rational(value.exact)
            self.decimal_renderings[name] = value.decimal()
        else:
            value = stepfn.as_rational(value)
            self.exact_values[name] = stepfn.format_rational(value)
            self.decimal_renderings[name] = norms.decimal(value)
        return value

    def record_exploratory(self, name, value):
        """Record a metric that is reported but never asserted."""
        self.exploratory[name] = render(value)
        LOG.warning("Exploratory metric %s = %s (not asserted)"
                    % (name, self.exploratory[name]))

    def record_profile(self, series, terms):
        """Attach a sequence of (n, value) pairs; values are Fractions or
        NormValues.
        """
        rows = []
        for n, value in terms:
            if isinstance(value, norms.NormValue):
                exact = value.exact
                rendered = value.decimal()
            else:
                exact = stepfn.as_rational(value)
                rendered = norms.decimal(exact)
            if exact is not None:
                exact = stepfn.format_rational(exact)
            rows.append((n, exact, rendered))
        self.profiles[series] = rows

    def check(self, name, passed, lhs=None, rhs=None):
        status = PASS if passed else FAIL
        self.assertions.append({'name': name, 'status': status,
                                'lhs': render(lhs), 'rhs': render(rhs)})
        if passed:
            LOG.debug("%s: %s" % (name, status))
        else:
            LOG.error("Assertion %s failed: lhs=%s rhs=%s"
                      % (name, render(lhs), render(rhs)))
        return bool(passed)

    def check_le(self, name, lhs, rhs, rel_tol=0):
        """Assert lhs <= rhs; exact unless either side is inexact."""
        if isinstance(lhs, norms.NormValue):
            passed = lhs.is_le(rhs, rel_tol)
        elif isinstance(rhs, norms.NormValue):
            passed = norms.NormValue(exact=lhs).is_le(rhs, rel_tol)
        else:
            passed = lhs <= rhs
        return self.check(name, passed, lhs, rhs)

    def check_lt(self, name, lhs, rhs):
        return self.check(name, lhs < rhs, lhs, rhs)

    def check_eq(self, name, lhs, rhs):
        return self.check(name, lhs == rhs, lhs, rhs)

    @property
    def passed(self):
        return all(a['status'] == PASS for a in self.assertions)

    @property
    def failures(self):
        return [a for a in self.assertions if a['status'] == FAIL]

    def count(self, status=PASS):
        return sum(1 for a in self.assertions if a['status'] == status)

    def merge(self, other, prefix=None):
        """Fold another report into this one, prefixing its names."""
        prefix = prefix or other.operation

        def key(name):
            return '%s.%s' % (prefix, name)

        for name, value in other.exact_values.items():
            self.exact_values[key(name)] = value
        for name, value in other.decimal_renderings.items():
            self.decimal_renderings[key(name)] = value
        for name, value in other.exploratory.items():
            self.exploratory[key(name)] = value
        for series, terms in other.profiles.items():
            self.profiles[key(series)] = terms
        for assertion in other.assertions:
            assertion = dict(assertion)
            assertion['name'] = key(assertion['name'])
            self.assertions.append(assertion)
        return self

    @contextlib.contextmanager
    def timed(self):
        start = time.time()
        try:
            yield self
        finally:
            self.runtime_ms = int(round((time.time() - start) * 1000))

    def to_json(self):
        return {
            'operation': self.operation,
            'config': self.config,
            'seed': self.seed,
            'exact_values': self.exact_values,
            'decimal_renderings': self.decimal_renderings,
            'exploratory': self.exploratory,
            'assertions': self.assertions,
            'profiles': dict(
                (series, [{'n': n, 'exact': exact, 'decimal': rendered}
                         for n, exact, rendered in terms])
                for series, terms in self.profiles.items()),
            'runtime_ms': self.runtime_ms,
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=4, separators=(',', ': '),
                          sort_keys=True)

    def csv_rows(self):
        """Term profiles flattened to rows; assertions if there are none."""
        rows = []
        for series, terms in self.profiles.items():
            for n, exact, rendered in terms:
                rows.append((self.operation, series, n, exact or '',
                             rendered))
        if not rows:
            for i, assertion in enumerate(self.assertions, 1):
                rows.append((self.operation, assertion['name'], i,
                             assertion['lhs'], assertion['status']))
        return rows

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        writer.writerows(self.csv_rows())
        return buf.getvalue()


def write_report(report, path, fmt='json'):
    """Write ``report`` to ``path`` in json or csv."""
    content = report.to_csv() if fmt == 'csv' else report.dumps() + '\n'
    with open(path, 'w') as f:
        f.write(content)
    LOG.info("Report saved in: %s" % path)
