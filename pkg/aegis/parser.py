#
#   Copyright (c) 2026, The aegis developers
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.
#

import logging
import math

import pyparsing as pp

import aegis.settings as S
import aegis.scenario_grammar as grammar
from aegis import data_utils
from aegis.scenario import from_values
from aegis.utils import AegisConfigError

logger = logging.getLogger(__name__)

SCHEMA = {(section, key): (kind, default, description)
          for section, key, kind, default, description in S.SCENARIO_SCHEMA}


class Parser(object):
    """ Turns scenario text into a validated, immutable ScenarioConfig. """

    def pyparse_line(self, line, lineno):
        """
        :return: the assignment group of the line, or None for blank and comment lines.
        :raises AegisConfigError: if the line is not `section.key = value`.
        """
        try:
            result = grammar.scenario_line.parseString(line, parseAll=True)
        except pp.ParseException as x:
            raise AegisConfigError("Expected 'section.key = value', got:\n\t'%s'\n\t%s^"
                                   % (line.rstrip(), ' ' * x.col), lineno)
        if 'assignment' not in result:
            return None
        return result.assignment

    def coerce(self, section, key, text, lineno=None):
        """ Converts a value token to the type the schema declares for section.key. """
        if (section, key) not in SCHEMA:
            raise AegisConfigError('Unknown scenario key %s.%s.' % (section, key), lineno)
        kind = SCHEMA[(section, key)][0]
        try:
            if isinstance(kind, tuple):
                if all(isinstance(choice, int) for choice in kind):
                    value = grammar.integer_value.parseString(text)[0]
                else:
                    value = grammar.word_value.parseString(text)[0]
                if value not in kind:
                    raise AegisConfigError('%s.%s must be one of %s, got %r.'
                                           % (section, key, ', '.join(map(str, kind)), text),
                                           lineno)
                return value
            if kind is int:
                return grammar.integer_value.parseString(text)[0]
            value = grammar.real_value.parseString(text)[0]
        except pp.ParseException:
            raise AegisConfigError('%s.%s expects %s, got %r.'
                                   % (section, key, self.describe_type(kind), text), lineno)
        if not math.isfinite(value):
            raise AegisConfigError('%s.%s must be finite, got %r.' % (section, key, text), lineno)
        return float(value)

    @staticmethod
    def describe_type(kind):
        if isinstance(kind, tuple):
            return 'one of ' + ', '.join(map(str, kind))
        return {int: 'an integer', float: 'a number'}[kind]

    def parse_values(self, text):
        """ {(section, key): value} of every assignment in text; duplicates are rejected. """
        values, seen = {}, {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            assignment = self.pyparse_line(line, lineno)
            if assignment is None:
                continue
            section, key = assignment.name.split('.', 1)
            if (section, key) in seen:
                raise AegisConfigError('%s.%s is already set on line %d.'
                                       % (section, key, seen[(section, key)]), lineno)
            seen[(section, key)] = lineno
            values[(section, key)] = self.coerce(section, key, assignment.value, lineno)
        return values

    def parse_text(self, text):
        return from_values(self.parse_values(text)).validate()

    def parse_file(self, path):
        if path is None:
            return from_values({}).validate()
        logger.debug('reading scenario %s', path)
        return self.parse_text(data_utils.read_text(path))

    def help_text(self):
        """ One line per scenario key with its default. """
        return '\n'.join('%s.%s = %r    # %s' % (section, key, default, description)
                         for section, key, _, default, description in S.SCENARIO_SCHEMA)
