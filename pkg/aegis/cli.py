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

import argparse
import logging
import sys

import cmd2

import aegis.settings as S
from aegis.client import Client

LOG_FORMAT = '%(asctime)s %(name)s %(levelname)s: %(message)s'


def parse_seeds(text):
    """ '1..10' (inclusive) or '1,2,5'. """
    try:
        if '..' in text:
            first, last = text.split('..', 1)
            seeds = list(range(int(first), int(last) + 1))
        else:
            seeds = [int(s) for s in text.split(',') if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("expected seeds like '1..10' or '1,2,5', got %r" % text)
    if not seeds:
        raise argparse.ArgumentTypeError('no seeds in %r' % text)
    return seeds


def parse_agents(text):
    agents = [a.strip() for a in text.split(',') if a.strip()]
    unknown = [a for a in agents if a not in S.uav.agents]
    if unknown or not agents:
        raise argparse.ArgumentTypeError('unknown agents %s; choose from %s'
                                         % (', '.join(unknown) or '(none)',
                                            ', '.join(S.uav.agents)))
    return agents


pretrain_parser = cmd2.Cmd2ArgumentParser(description='Hotboot a relay agent.')
pretrain_parser.add_argument('--config', help='scenario file (defaults when omitted)')
pretrain_parser.add_argument('--out', default='hotboot', help='hotboot store directory')
pretrain_parser.add_argument('--gamma-scenarios', dest='scenarios', type=int,
                             default=S.run.hotboot_scenarios, help='pretraining episodes')
pretrain_parser.add_argument('--slots', type=int, default=S.run.hotboot_slots,
                             help='slots per pretraining episode')
pretrain_parser.add_argument('--seed', type=int, help='master seed')

run_parser = cmd2.Cmd2ArgumentParser(description='Run one episode.')
run_parser.add_argument('--config', help='scenario file (defaults when omitted)')
run_parser.add_argument('--seed', type=int, help='master seed')
run_parser.add_argument('--slots', type=int, help='slots in the episode')
run_parser.add_argument('--case', type=int, choices=(1, 2), help='observation case')
run_parser.add_argument('--hotboot', help='hotboot store directory')
run_parser.add_argument('--out', default='trace.csv', help='trace CSV path')

sweep_parser = cmd2.Cmd2ArgumentParser(description='Compare agents over seeds.')
sweep_parser.add_argument('--config', help='scenario file (defaults when omitted)')
sweep_parser.add_argument('--agents', type=parse_agents, default=['drlur', 'hpur', 'qlearn'],
                          help='comma separated agents')
sweep_parser.add_argument('--seeds', type=parse_seeds, default=list(range(1, 11)),
                          help="seed range '1..10' or list '1,2,5'")
sweep_parser.add_argument('--slots', type=int, help='slots per episode')
sweep_parser.add_argument('--hotboot', help='hotboot store directory')
sweep_parser.add_argument('--threads', type=int, help='worker processes (else %s)'
                          % S.env.threads_var)
sweep_parser.add_argument('--out', default='sweep', help='output directory')

selftest_parser = cmd2.Cmd2ArgumentParser(description='Run the numerical self-checks.')

COMMAND_PARSERS = dict(pretrain=pretrain_parser, run=run_parser, sweep=sweep_parser,
                       selftest=selftest_parser)


class AegisApp(cmd2.Cmd):
    """ Interactive shell; every command also runs one-shot from the command line. """

    def __init__(self, client, debug=False):
        cmd2.Cmd.__init__(self, allow_cli_args=False)
        self.client = client
        self.debug = debug
        self.prompt = 'aegis> '

    def dispatch(self, command, args):
        options = {k: v for k, v in vars(args).items() if not k.startswith(('cmd2_', '__'))}
        self.exit_code = self.client.execute(command, options, debug=self.debug)
        return self.exit_code

    @cmd2.with_argparser(pretrain_parser)
    def do_pretrain(self, args):
        self.dispatch('pretrain', args)

    @cmd2.with_argparser(run_parser)
    def do_run(self, args):
        self.dispatch('run', args)

    @cmd2.with_argparser(sweep_parser)
    def do_sweep(self, args):
        self.dispatch('sweep', args)

    @cmd2.with_argparser(selftest_parser)
    def do_selftest(self, args):
        self.dispatch('selftest', args)


def main(argv=None, client=None):
    """ Runs argv once (or the shell when argv names no command) and returns the exit code. """
    argv = sys.argv[1:] if argv is None else list(argv)
    top = argparse.ArgumentParser(prog='aegis', description='UAV relay anti-jamming simulator.')
    top.add_argument('-v', '--verbose', action='store_true', help='log progress at INFO level')
    top.add_argument('--debug', action='store_true', help='raise errors with tracebacks')
    top.add_argument('command', nargs='?', choices=sorted(COMMAND_PARSERS))
    top.add_argument('args', nargs=argparse.REMAINDER)
    ns = top.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format=LOG_FORMAT)
    app = AegisApp(client if client is not None else Client(), debug=ns.debug)
    if ns.command is None:
        print("Welcome to aegis. Type 'help' for the commands and 'quit' to quit.")
        return app.cmdloop()
    parser = COMMAND_PARSERS[ns.command]
    parser.prog = 'aegis %s' % ns.command
    args = parser.parse_args(ns.args)
    return app.dispatch(ns.command, args)


def run_command_line():
    sys.exit(main())


if __name__ == "__main__":
    run_command_line()
