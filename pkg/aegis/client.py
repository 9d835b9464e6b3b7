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
import sys
import time

import prettytable

import aegis.settings as S
from aegis import utils
from aegis.engine import Engine
from aegis.parser import Parser

logger = logging.getLogger(__name__)


def exit_code_for(error):
    """ Exit code of the command-line vocabulary for an AegisError. """
    if isinstance(error, utils.AegisNumericError):
        return S.exit_codes.numeric
    if isinstance(error, (utils.AegisIOError, utils.AegisFormatError)):
        return S.exit_codes.io
    return S.exit_codes.config


class Client(object):
    def __init__(self, engine=None, parser=None, out=None):
        """
        The client parses scenario files with a Parser and executes commands on
        an Engine, printing results and turning errors into exit codes.
        """
        self.parser = parser if parser is not None else Parser()
        self.engine = engine if engine is not None else Engine()
        self.out = out

    def write(self, text):
        print(text, file=self.out if self.out is not None else sys.stdout)

    def load_config(self, path, **overrides):
        """ The scenario at path (defaults when None) with section__key overrides applied. """
        config = self.parser.parse_file(path)
        overrides = {k: v for k, v in overrides.items() if v is not None}
        if overrides:
            config = config.with_values(**overrides).validate()
        return config

    def call_engine(self, method_name, args_dict, debug=False):
        method = getattr(self.engine, method_name)
        if debug:
            return method(**args_dict)
        try:
            return method(**args_dict)
        except utils.AegisError as e:
            return dict(message=str(e), error=True, exit_code=exit_code_for(e))

    def pretrain(self, config=None, out='hotboot', scenarios=S.run.hotboot_scenarios,
                 slots=S.run.hotboot_slots, seed=None):
        scenario = self.load_config(config)
        seed = scenario.run.seed if seed is None else seed
        return 'pretrain', dict(config=scenario, out_dir=out, scenarios=scenarios,
                                slots=slots, seed=seed)

    def run(self, config=None, seed=None, slots=None, case=None, hotboot=None,
            out='trace.csv'):
        scenario = self.load_config(config, run__seed=seed, run__slots=slots, uav__case=case)
        return 'run', dict(config=scenario, out_path=out, hotboot_dir=hotboot)

    def sweep(self, config=None, agents=('drlur', 'hpur', 'qlearn'), seeds=range(1, 11),
              out='sweep', hotboot=None, threads=None, slots=None):
        scenario = self.load_config(config, run__slots=slots)
        return 'sweep', dict(config=scenario, agents=list(agents), seeds=list(seeds),
                             out_dir=out, hotboot_dir=hotboot, threads=threads)

    def selftest(self, gradient_fn=None):
        return 'selftest', dict(gradient_fn=gradient_fn)

    def execute(self, command, options=None, debug=False, timing=False):
        """
        Runs one command ('pretrain', 'run', 'sweep' or 'selftest') with the
        given keyword options, prints its result and returns the exit code.
        """
        if timing:
            start_time = time.time()
        try:
            method_name, args_dict = getattr(self, command)(**(options or {}))
        except utils.AegisError as e:
            if debug:
                raise
            self.write(str(e))
            return exit_code_for(e)
        result = self.call_engine(method_name, args_dict, debug=debug)
        code = self.pretty_print(method_name, result)
        if timing:
            self.write('Elapsed time: %.2f seconds.' % (time.time() - start_time))
        return code

    def pretty_print(self, method_name, result):
        if result.get('error'):
            self.write(result['message'])
            return result['exit_code']
        if method_name == 'selftest':
            return self.print_selftest(result)
        if 'message' in result:
            self.write(result['message'])
        if method_name == 'pretrain' and result['artifacts']:
            table = prettytable.PrettyTable(['file', 'digest'])
            table.align = 'l'
            for artifact in result['artifacts']:
                table.add_row([artifact['path'], artifact['digest']])
            self.write(table.get_string())
        if result.get('report'):
            self.write(result['report'])
        return S.exit_codes.ok

    def print_selftest(self, result):
        table = prettytable.PrettyTable(['check', 'measured', 'tolerance', 'status', 'detail'])
        table.align = 'l'
        for check in result['checks']:
            table.add_row([check.name, '%.3g' % check.measured, '%.3g' % check.tolerance,
                           'ok' if check.passed else 'FAILED', check.detail])
        self.write(table.get_string())
        if result['passed']:
            return S.exit_codes.ok
        failed = [c.name for c in result['checks'] if not c.passed]
        self.write('Failed checks: %s' % ', '.join(failed))
        return S.exit_codes.selftest_failed
