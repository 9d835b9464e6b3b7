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
import matplotlib
matplotlib.use('Agg')

import logging
import os
import time
from collections import Counter

import numpy
import prettytable

import aegis.settings as S
from aegis import analysis, data_utils, game, hotboot, plotting_utils
from aegis.parser import Parser
from aegis.persistence_layer import PersistenceLayer

logger = logging.getLogger('aegis.experiments')


def parser_args_to_dict(args):
    """
    converts argparse args to a dict, stamped with the start time
    EX:
    >>> parser = argparse.ArgumentParser()
    >>> parser.add_argument('--seeds', default=10, type=int)
    >>> parser_args_to_dict(parser.parse_args())['seeds']
    10
    """
    argsdict = dict(vars(args))
    argsdict['time'] = int(time.time())
    return argsdict


def load_preset(name, **overrides):
    """ A shipped scenario by name, e.g. 'smart-jammer', with section__key overrides. """
    path = os.path.join(S.path.scenarios_dir, name + '.scenario')
    config = Parser().parse_file(path)
    overrides = {k: v for k, v in overrides.items() if v is not None}
    return config.with_values(**overrides).validate() if overrides else config


def pretrain(config, store_dir, seed=0):
    """ Hotboots config.uav.agent into store_dir unless an artifact is already there. """
    store = PersistenceLayer(store_dir)
    if not store.has(config.uav.agent, config):
        hotboot.hotboot(config, seed=seed, store=store)
    return store_dir


def run_agents(config, agents, seeds, threads=None, hotboot_dirs=None):
    """ {label: [Trace per seed]}; hotboot_dirs maps a label to (agent, store directory). """
    traces = {}
    for agent in agents:
        cell = config.with_values(uav__agent=agent).validate()
        traces[agent] = game.run_batch(cell, seeds, threads=threads)
        logger.info('%s done on %d seeds', agent, len(seeds))
    for label, (agent, store_dir) in (hotboot_dirs or {}).items():
        cell = config.with_values(uav__agent=agent).validate()
        traces[label] = game.run_batch(cell, seeds, threads=threads, hotboot_dir=store_dir)
    return traces


def modal_action(trace, column, last=200):
    values = trace.column(column)[-last:]
    return Counter(values.tolist()).most_common(1)[0][0]


def fraction_at(trace, column, value, last=200):
    values = trace.column(column)[-last:]
    return float(numpy.mean(values == value))


def summaries(traces_by_agent, config, eq):
    return {agent: [analysis.summarize(t, config.run.window, eq.u_uav, eq.ber, config.run.eta)
                    for t in traces]
            for agent, traces in traces_by_agent.items()}


def check(name, value, bound, passed):
    return dict(name=name, value=value, bound=bound, passed=bool(passed))


def format_checks(checks, title):
    table = prettytable.PrettyTable(['check', 'value', 'bound', 'status'])
    table.align = 'l'
    for c in checks:
        table.add_row([c['name'], '%.6g' % c['value'], c['bound'],
                       'ok' if c['passed'] else 'FAILED'])
    return title + '\n' + table.get_string()


def save_result(result, out_dir, name):
    """ Writes <name>.txt (the check table) and <name>-cells.csv (one row per agent and seed). """
    data_utils.ensure_dir(out_dir)
    report = format_checks(result['checks'], name)
    data_utils.atomic_write_text(os.path.join(out_dir, name + '.txt'), report + '\n')
    if result.get('cells') is not None:
        data_utils.write_frame_csv(os.path.join(out_dir, name + '-cells.csv'), result['cells'])
    return report


def plot_result(result, out_dir, name):
    data_utils.ensure_dir(out_dir)
    return plotting_utils.plot_learning_curves(result['summaries'], os.path.join(out_dir, name),
                                               ne_ber=result['ne_ber'])
