#!/usr/bin/env python
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


"""
Run the rikit verification suites and write their reports.

Every command writes one JSON or CSV report and exits 0 when all of its
assertions pass, 1 when one fails and 2 on an invalid configuration.

"""

import argparse
import logging
import os

import yaml

from rikit import counterexample
from rikit import input_parser
from rikit import norms
from rikit import report as rep
from rikit import stepfn
from rikit import suites


COMMANDS = ('verify-counterexample', 'aocea-search', 'span-distance',
            'property-suite', 'norm')
FORMATS = ('json', 'csv')
KIND_NAMES = ('l1', 'linf', 'lp', 'lorentz', 'orlicz', 'counterexample')


class RunConfig(object):
    """Validated parameters of one command."""

    def __init__(self, command, seed=0, n_max=20,
                 k_max=counterexample.DEFAULT_K_MAX, m=7,
                 budget=suites.DESCENT_BUDGET, instances=100, norm=None,
                 input=None, output_path=None, fmt='json', settings=None,
                 insecure=False, descriptor=None):
        self.command = command
        self.seed = seed
        self.n_max = n_max
        self.k_max = k_max
        self.m = m
        self.budget = budget
        self.instances = instances
        self.norm = norm or counterexample.COUNTEREXAMPLE
        self.input = input
        self.fmt = fmt
        self.output_path = output_path or 'rikit-%s.%s' % (command, fmt)
        self.settings = dict(settings or {})
        self.insecure = insecure
        self.descriptor = descriptor

    def validate(self):
        """Raise DomainError on the first parameter out of range."""
        if self.command not in COMMANDS:
            raise stepfn.DomainError("Unknown command %r" % (self.command,))
        if self.fmt not in FORMATS:
            raise stepfn.DomainError("Unknown format %r" % (self.fmt,))
        if not 0 <= self.seed < 2 ** 64:
            raise stepfn.DomainError("Seed must fit in 64 bits, got %s"
                                     % self.seed)
        checks = (('n_max', 4), ('k_max', 1), ('m', 1), ('budget', 0),
                  ('instances', 1))
        for name, low in checks:
            if getattr(self, name) < low:
                raise stepfn.DomainError("%s must be >= %d, got %s"
                                         % (name, low, getattr(self, name)))
        for name in ('k_max', 'depth', 'tail_width', 'exhaustive_limit',
                     'restarts'):
            value = self.settings.get(name)
            if value is not None and (not isinstance(value, int) or
                                      value < 1):
                raise stepfn.DomainError("Setting %s must be a positive "
                                         "integer, got %r" % (name, value))
        for name in ('uniform_samples', 'budget'):
            value = self.settings.get(name)
            if value is not None and (not isinstance(value, int) or
                                      value < 0):
                raise stepfn.DomainError("Setting %s must be a nonnegative "
                                         "integer, got %r" % (name, value))
        golden_tol = self.settings.get('golden_tol')
        if golden_tol is not None and not (
                isinstance(golden_tol, (int, float)) and golden_tol > 0):
            raise stepfn.DomainError("Setting golden_tol must be a positive "
                                     "number, got %r" % (golden_tol,))
        if self.command == 'norm' and not self.input:
            raise stepfn.DomainError("The norm command needs --input")
        return self

    @classmethod
    def from_args(cls, args):
        settings = {}
        if getattr(args, 'settings_file', None):
            settings = input_parser.read_config_yaml(args.settings_file)
        k_max = getattr(args, 'k_max', None)
        if k_max is None:
            k_max = settings.get('k_max', counterexample.DEFAULT_K_MAX)
        descriptor = None
        if getattr(args, 'kind', None):
            data = {'kind': args.kind, 'p': args.p, 'q': args.q}
            if args.kind == 'orlicz':
                data['phi'] = args.phi
            descriptor = norms.NormDescriptor.from_json(data)
        return cls(args.command, seed=args.seed,
                   n_max=getattr(args, 'n_max', 20), k_max=k_max,
                   m=getattr(args, 'm', 7),
                   budget=getattr(args, 'budget', suites.DESCENT_BUDGET),
                   instances=getattr(args, 'instances', 100),
                   norm=descriptor, input=getattr(args, 'input', None),
                   output_path=args.output, fmt=args.format,
                   settings=settings,
                   insecure=getattr(args, 'insecure', False),
                   descriptor=getattr(args, 'descriptor', None)).validate()


class RikitClient:
    log_format = "%(asctime)s %(name)s:%(lineno)d %(levelname)s %(message)s"

    def __init__(self, args):
        '''Prepare a suite run.'''
        self.logger = logging.getLogger("rikit")
        self.console_log_handle = logging.StreamHandler()
        self.console_log_handle.setFormatter(
            logging.Formatter(self.log_format))
        self.logger.addHandler(self.console_log_handle)

        self.args = args
        self.config = args.run

        # set default log level to INFO.
        if self.args.silent:
            self.logger.setLevel(logging.WARNING)
        elif self.args.verbose:
            self.logger.setLevel(logging.DEBUG)
        else:
            self.logger.setLevel(logging.INFO)
        norms.set_precision()

    def _finish(self, report):
        '''Write the report and turn its assertions into an exit code.'''
        rep.write_report(report, self.config.output_path, self.config.fmt)
        if report.passed:
            self.logger.info("All %d assertions passed in %d ms."
                             % (len(report.assertions), report.runtime_ms))
            return 0
        for failure in report.failures:
            self.logger.error("Failed assertion: %s (lhs=%s, rhs=%s)"
                              % (failure['name'], failure['lhs'],
                                 failure['rhs']))
        self.logger.error("%d of %d assertions failed."
                          % (len(report.failures), len(report.assertions)))
        return 1

    def _run(self, suite, *args, **kwargs):
        self.logger.info("Starting %s (seed %d)..."
                         % (self.config.command, self.config.seed))
        try:
            report = suite(*args, **kwargs)
        except ValueError as e:
            self.logger.error("%s aborted: %s" % (self.config.command, e))
            exit(1)
        return self._finish(report)

    def verify_counterexample(self):
        '''Exact verification of the witness.'''
        cfg = self.config
        return self._run(suites.verify_counterexample, n_max=cfg.n_max,
                         seed=cfg.seed)

    def aocea_search(self):
        cfg = self.config
        return self._run(suites.aocea_search, n_max=cfg.n_max, d=cfg.norm,
                         k_max=cfg.k_max, seed=cfg.seed,
                         settings=cfg.settings)

    def span_distance(self):
        cfg = self.config
        return self._run(suites.span_distance, m=cfg.m, n_max=cfg.n_max,
                         budget=cfg.budget, seed=cfg.seed,
                         instances=cfg.instances, settings=cfg.settings)

    def property_suite(self):
        cfg = self.config
        return self._run(suites.property_suite, seed=cfg.seed,
                         instances=cfg.instances)

    def norm(self):
        '''Evaluate one norm on a step function file or URL.'''
        cfg = self.config
        parser = input_parser.InputParser(insecure=cfg.insecure)
        location = cfg.input
        try:
            X = parser.load_step_function(location)
            d = cfg.norm
            if cfg.descriptor:
                location = cfg.descriptor
                d = parser.load_descriptor(location)
        except Exception as e:
            self.logger.error("Unable to load %s: %s" % (location, e))
            exit(1)
        return self._run(suites.evaluate_norm, X, d, seed=cfg.seed)


def parse_cli_args(args=None):

    usage_string = ('rikit [-h] <ARG> ...\n\n'
                    'To see help on specific argument, do:\n'
                    'rikit <ARG> -h')

    parser = argparse.ArgumentParser(
        description='Verification suites for rearrangement-invariant '
                    'function spaces. Reports are written as JSON or CSV.',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        usage=usage_string
    )

    subparsers = parser.add_subparsers(help='Available subcommands.',
                                       dest='command')

    # Arguments that go with all subcommands.
    shared_args = argparse.ArgumentParser(add_help=False)
    group = shared_args.add_mutually_exclusive_group()
    group.add_argument('-s', '--silent',
                       action='store_true',
                       help='Suppress output except warnings and errors.')

    group.add_argument('-v', '--verbose',
                       action='count',
                       default=0,
                       help='Show verbose output.')

    shared_args.add_argument('--seed',
                             action='store',
                             required=False,
                             type=int,
                             default=int(os.environ.get('RIKIT_SEED', 0)),
                             help='Master seed of the randomized suites. '
                                  'Defaults to env[RIKIT_SEED] or 0.')

    shared_args.add_argument('-o', '--output',
                             action='store',
                             required=False,
                             type=str,
                             help='Path of the report file. Defaults to '
                                  'rikit-<command>.<format>.')

    shared_args.add_argument('--format',
                             action='store',
                             required=False,
                             choices=FORMATS,
                             default='json',
                             help='Report format.')

    shared_args.add_argument('--config',
                             action='store',
                             required=False,
                             dest='settings_file',
                             type=str,
                             help='Path of a YAML file overriding search '
                                  'settings (k_max, depth, tail_width, '
                                  'exhaustive_limit, uniform_samples, '
                                  'restarts, golden_tol, budget).')

    # Arguments that pick the witness truncation.
    witness_args = argparse.ArgumentParser(add_help=False)
    witness_args.add_argument('--n-max',
                              action='store',
                              required=False,
                              dest='n_max',
                              type=int,
                              default=20,
                              help='Truncation level of the witness.')

    # Arguments that select a norm.
    norm_args = argparse.ArgumentParser(add_help=False)
    norm_args.add_argument('--kind',
                           action='store',
                           required=False,
                           choices=KIND_NAMES,
                           default='counterexample',
                           help='Norm kind.')
    norm_args.add_argument('--p',
                           action='store',
                           required=False,
                           type=str,
                           help='Exponent p of Lp and Lorentz norms, as an '
                                'integer or p/q.')
    norm_args.add_argument('--q',
                           action='store',
                           required=False,
                           type=str,
                           help='Second Lorentz exponent, or "inf".')
    norm_args.add_argument('--phi',
                           action='store',
                           required=False,
                           type=str,
                           default='exp(u)-1',
                           help='Young function of the Orlicz norm: '
                                '"exp(u)-1" or "u^p".')

    # verify-counterexample command
    parser_verify = subparsers.add_parser(
        'verify-counterexample', parents=[shared_args, witness_args],
        help='Run every exact verification of the witness.')
    parser_verify.set_defaults(func='verify_counterexample')

    # aocea-search command
    parser_aocea = subparsers.add_parser(
        'aocea-search', parents=[shared_args, witness_args, norm_args],
        help='Search convex averages of disjoint tails.')
    parser_aocea.add_argument('--k-max',
                              action='store',
                              required=False,
                              dest='k_max',
                              type=int,
                              help='Largest number of averaged pieces. '
                                   'Defaults to the settings file or %d.'
                                   % counterexample.DEFAULT_K_MAX)
    parser_aocea.set_defaults(func='aocea_search')

    # span-distance command
    parser_span = subparsers.add_parser(
        'span-distance', parents=[shared_args, witness_args],
        help='Decompose into equidistributed differences and estimate '
             'distances to their span.')
    parser_span.add_argument('-m',
                             action='store',
                             required=False,
                             dest='m',
                             type=int,
                             default=7,
                             help='Denominator of the decompositions.')
    parser_span.add_argument('--budget',
                             action='store',
                             required=False,
                             type=int,
                             default=suites.DESCENT_BUDGET,
                             help='Line searches of the descent.')
    parser_span.add_argument('--instances',
                             action='store',
                             required=False,
                             type=int,
                             default=20,
                             help='Seeded L2 oracle instances.')
    parser_span.set_defaults(func='span_distance')

    # property-suite command
    parser_property = subparsers.add_parser(
        'property-suite', parents=[shared_args],
        help='Run every randomized lemma family.')
    parser_property.add_argument('--instances',
                                 action='store',
                                 required=False,
                                 type=int,
                                 default=100,
                                 help='Instances per family.')
    parser_property.set_defaults(func='property_suite')

    # norm command
    parser_norm = subparsers.add_parser(
        'norm', parents=[shared_args, norm_args],
        help='Evaluate one norm on a step function.')
    parser_norm.add_argument('--input',
                             action='store',
                             required=True,
                             type=str,
                             help='File path or URL of a JSON list of '
                                  '{"t0", "t1", "v"} segments.')
    parser_norm.add_argument('--descriptor',
                             action='store',
                             required=False,
                             type=str,
                             help='File path or URL of a JSON norm '
                                  'descriptor such as {"kind": "Lorentz", '
                                  '"p": "2", "q": "inf"}. Overrides '
                                  '--kind.')
    parser_norm.add_argument('-k', '--insecure',
                             action='store_true',
                             required=False,
                             help='Skip SSL checks when fetching --input.')
    parser_norm.set_defaults(func='norm')

    parsed = parser.parse_args(args=args)
    if not getattr(parsed, 'func', None):
        parser.error('a subcommand is required')
    try:
        parsed.run = RunConfig.from_args(parsed)
    except (ValueError, TypeError, IOError, yaml.YAMLError) as e:
        parser.error(str(e))
    return parsed


def entry_point():
    args = parse_cli_args()
    client = RikitClient(args)
    raise SystemExit(getattr(client, args.func)())
