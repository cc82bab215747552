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

import json
import logging
import os
import tempfile

import mock
import unittest

from rikit import norms
from rikit import report as rep
from rikit import rikit as rk
from rikit import stepfn


class TestRikitClient(unittest.TestCase):

    test_path = os.path.dirname(os.path.realpath(__file__))
    input_file = '%s/one.json' % test_path

    def setUp(self):
        """Test case setup"""
        logging.disable(logging.CRITICAL)
        fd, self.output = tempfile.mkstemp(suffix='.json')
        os.close(fd)
        self.addCleanup(os.remove, self.output)

    def patch(self, name, **kwargs):
        """
        :param name: Name of class to be patched
        :param kwargs: directly passed to mock.patch
        :return: mock
        """
        patcher = mock.patch(name, **kwargs)
        thing = patcher.start()
        self.addCleanup(patcher.stop)
        return thing

    def mock_argv(self, command='norm', **kwargs):
        """
        Build argv for test.
        :param command: subcommand to run
        :param verbose: verbosity flag
        :param silent: silent flag
        :param extra: further arguments
        :return: argv
        """
        argv = [command]
        if kwargs.get('verbose', None):
            argv.append(kwargs.get('verbose', None))
        if kwargs.get('silent', None):
            argv.append(kwargs.get('silent', None))
        argv.extend(['-o', self.output])
        if command == 'norm':
            argv.extend(('--input', kwargs.get('input', self.input_file)))
        argv.extend(kwargs.get('extra', ()))
        return argv

    def failing_report(self, *args, **kwargs):
        report = rep.ExperimentReport('norm')
        report.check('broken', False, 1, 0)
        return report

    def test_verbose(self):
        """Verbosity flags set the logger level."""
        args = rk.parse_cli_args(self.mock_argv())
        client = rk.RikitClient(args)
        self.assertEqual(logging.INFO, client.logger.level)

        args = rk.parse_cli_args(self.mock_argv(verbose='-v'))
        client = rk.RikitClient(args)
        self.assertEqual(logging.DEBUG, client.logger.level)

        args = rk.parse_cli_args(self.mock_argv(silent='-s'))
        client = rk.RikitClient(args)
        self.assertEqual(logging.WARNING, client.logger.level)

    def test_silent_and_verbose_conflict(self):
        """-s and -v are mutually exclusive."""
        with self.assertRaises(SystemExit) as ctx:
            rk.parse_cli_args(self.mock_argv(verbose='-v', silent='-s'))
        self.assertEqual(2, ctx.exception.code)

    def test_invalid_configuration(self):
        """Out of range parameters exit with code 2."""
        bad = [
            self.mock_argv('span-distance', extra=['-m', '0']),
            self.mock_argv('verify-counterexample',
                           extra=['--n-max', '3']),
            self.mock_argv('aocea-search', extra=['--kind', 'lp']),
            self.mock_argv('aocea-search', extra=['--kind', 'lp',
                                                  '--p', '1/2']),
            self.mock_argv('aocea-search', extra=[
                '--config', self.test_path + '/rikit.bad.yaml']),
            self.mock_argv('property-suite', extra=['--seed', '-1']),
            [],
        ]
        for argv in bad:
            with self.assertRaises(SystemExit) as ctx:
                rk.parse_cli_args(argv)
            self.assertEqual(2, ctx.exception.code, argv)

    def test_seed_from_environment(self):
        """RIKIT_SEED sets the default seed."""
        with mock.patch.dict(os.environ, {'RIKIT_SEED': '9'}):
            args = rk.parse_cli_args(self.mock_argv('property-suite'))
        self.assertEqual(9, args.run.seed)
        args = rk.parse_cli_args(self.mock_argv('property-suite',
                                                extra=['--seed', '4']))
        self.assertEqual(4, args.run.seed)

    def test_settings_file(self):
        """YAML settings are loaded and k_max falls back to the default."""
        args = rk.parse_cli_args(self.mock_argv('aocea-search', extra=[
            '--config', self.test_path + '/rikit.test.yaml']))
        self.assertEqual(6, args.run.settings['depth'])
        self.assertEqual(64, args.run.k_max)
        args = rk.parse_cli_args(self.mock_argv('aocea-search', extra=[
            '--k-max', '5', '--kind', 'lorentz', '--p', '2', '--q', 'inf']))
        self.assertEqual(5, args.run.k_max)
        self.assertEqual(norms.NormDescriptor.lorentz(2, 'inf'),
                         args.run.norm)

    def test_default_output_path(self):
        """Reports default to rikit-<command>.<format>."""
        config = rk.RunConfig('span-distance', fmt='csv')
        self.assertEqual('rikit-span-distance.csv', config.output_path)
        with self.assertRaises(stepfn.DomainError):
            rk.RunConfig('norm').validate()
        with self.assertRaises(stepfn.DomainError):
            rk.RunConfig('norm', input='x.json',
                         settings={'golden_tol': 0}).validate()

    def test_norm(self):
        """The constant 1 has counterexample norm exactly 1."""
        args = rk.parse_cli_args(self.mock_argv())
        client = rk.RikitClient(args)
        self.assertEqual(0, client.norm())
        with open(self.output) as f:
            data = json.load(f)
        self.assertEqual('norm', data['operation'])
        self.assertEqual('1/1', data['exact_values']['norm'])

    def test_norm_csv(self):
        """CSV reports hold the term profile."""
        args = rk.parse_cli_args(self.mock_argv(extra=['--format', 'csv']))
        client = rk.RikitClient(args)
        self.assertEqual(0, client.norm())
        with open(self.output) as f:
            self.assertTrue(f.readline().startswith('report,series'))

    def test_norm_lp(self):
        """Other kinds are selected with --kind and --p."""
        args = rk.parse_cli_args(self.mock_argv(extra=['--kind', 'lp',
                                                       '--p', '3/2']))
        self.assertEqual(norms.NormDescriptor.lp('3/2'), args.run.norm)
        client = rk.RikitClient(args)
        self.assertEqual(0, client.norm())

    def test_norm_orlicz_power(self):
        """--phi u^p reads its exponent from --p."""
        args = rk.parse_cli_args(self.mock_argv(extra=[
            '--kind', 'orlicz', '--phi', 'u^p', '--p', '2']))
        self.assertEqual('Orlicz(u^2)', args.run.norm.name)
        client = rk.RikitClient(args)
        self.assertEqual(0, client.norm())

    def test_norm_descriptor_file(self):
        """--descriptor reads the norm from a JSON file."""
        mock_suite = self.patch('rikit.suites.evaluate_norm',
                                return_value=rep.ExperimentReport('norm'))
        args = rk.parse_cli_args(self.mock_argv(extra=[
            '--descriptor', self.test_path + '/lorentz.json']))
        client = rk.RikitClient(args)
        self.assertEqual(0, client.norm())
        self.assertEqual(norms.NormDescriptor.lorentz(2, 'inf'),
                         mock_suite.call_args[0][1])

    def test_norm_missing_descriptor(self):
        """An unreadable descriptor file exits with code 1."""
        args = rk.parse_cli_args(self.mock_argv(extra=[
            '--descriptor', self.test_path + '/nonexistent.json']))
        client = rk.RikitClient(args)
        with self.assertRaises(SystemExit) as ctx:
            client.norm()
        self.assertEqual(1, ctx.exception.code)

    def test_norm_missing_input(self):
        """An unreadable input file exits with code 1."""
        args = rk.parse_cli_args(self.mock_argv(
            input=self.test_path + '/nonexistent.json'))
        client = rk.RikitClient(args)
        with self.assertRaises(SystemExit) as ctx:
            client.norm()
        self.assertEqual(1, ctx.exception.code)

    def test_failed_assertion(self):
        """A failed assertion makes the command return 1."""
        self.patch('rikit.suites.evaluate_norm',
                   side_effect=self.failing_report)
        args = rk.parse_cli_args(self.mock_argv())
        client = rk.RikitClient(args)
        self.assertEqual(1, client.norm())
        with open(self.output) as f:
            self.assertEqual('fail', json.load(f)['assertions'][0]['status'])

    def test_precondition_error(self):
        """A violated precondition aborts with exit code 1."""
        self.patch('rikit.suites.verify_counterexample',
                   side_effect=stepfn.PreconditionError('bad'))
        args = rk.parse_cli_args(self.mock_argv('verify-counterexample'))
        client = rk.RikitClient(args)
        with self.assertRaises(SystemExit) as ctx:
            client.verify_counterexample()
        self.assertEqual(1, ctx.exception.code)

    def test_dispatch(self):
        """Each command calls its suite with the parsed parameters."""
        mock_suite = self.patch('rikit.suites.span_distance',
                                return_value=rep.ExperimentReport('x'))
        args = rk.parse_cli_args(self.mock_argv('span-distance', extra=[
            '-m', '5', '--budget', '3', '--instances', '2', '--seed', '8']))
        client = rk.RikitClient(args)
        self.assertEqual(0, getattr(client, args.func)())
        mock_suite.assert_called_with(m=5, n_max=20, budget=3, seed=8,
                                      instances=2, settings={})

    def test_entry_point(self):
        """The console script exits with the command's return value."""
        self.patch('sys.argv', new=['rikit'] + self.mock_argv())
        with self.assertRaises(SystemExit) as ctx:
            rk.entry_point()
        self.assertEqual(0, ctx.exception.code)
