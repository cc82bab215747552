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

import requests
import yaml

from rikit import norms
from rikit import stepfn


SETTINGS_KEYS = ('k_max', 'depth', 'tail_width', 'exhaustive_limit',
                 'uniform_samples', 'restarts', 'golden_tol', 'budget')


def read_config_yaml(path):
    """Reads search settings from the specified YAML file."""
    with open(path, 'r') as yaml_file:
        settings = yaml.safe_load(yaml_file) or {}
    if not isinstance(settings, dict):
        raise stepfn.DomainError("Settings file %s must hold a mapping"
                                 % path)
    unknown = sorted(set(settings) - set(SETTINGS_KEYS))
    if unknown:
        raise stepfn.DomainError("Unknown settings in %s: %s"
                                 % (path, ', '.join(unknown)))
    return settings


class InputParser(object):

    """Loads step functions and norm descriptors from files or URLs."""

    def __init__(self, insecure=False):
        """
        Initialize the InputParser.

        :param insecure: Whether https requests, if any, should be insecure.
        """
        self.logger = logging.getLogger(__name__)
        self.insecure = insecure

    def _read(self, location):
        """Return the text at ``location``.

        :param location: file path or URL
        """
        try:
            response = requests.get(location, verify=not self.insecure)
            response.raise_for_status()
            return response.text
        # If the location isn't a valid URL, we assume it is a file path.
        except requests.exceptions.MissingSchema:
            try:
                with open(location) as data_file:
                    return data_file.read()
            except Exception:
                self.logger.error("Error reading the input file %s."
                                  % location)
                raise
        except Exception:
            self.logger.error("Error fetching the input %s." % location)
            raise

    def load_step_function(self, location):
        """Parse a StepFunction from JSON.

        Accepts either a list of {t0, t1, v} segments or a mapping with a
        ``segments`` key.
        """
        data = json.loads(self._read(location))
        if isinstance(data, dict):
            data = data.get('segments')
        if not isinstance(data, list):
            raise stepfn.DomainError("%s holds no segment list" % location)
        X = stepfn.StepFunction.from_json(data)
        self.logger.debug("Loaded %d segments from %s"
                          % (len(X), location))
        return X

    def load_descriptor(self, location):
        """Parse a NormDescriptor from a JSON object."""
        return norms.NormDescriptor.from_json(json.loads(
            self._read(location)))
