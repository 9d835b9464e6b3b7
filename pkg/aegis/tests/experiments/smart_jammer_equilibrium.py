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
"""
Smart jammer against a UAV with a good link to BS1. The one-slot game has the
full-power pair (150, 80) mW as an equilibrium; converged play should settle
there. With --with_case2 the same seeds are rerun with delayed, noisy
observations and the BER degradation against the ideal case is measured.
"""
import matplotlib
matplotlib.use('Agg')

import argparse
import logging

import numpy
import pandas

import experiment_utils as eu
from aegis import analysis


def play(config, seeds, threads):
    traces = eu.run_agents(config, ['drlur'], seeds, threads=threads)['drlur']
    rows = []
    for seed, trace in zip(seeds, traces):
        rows.append(dict(case=config.uav.case, seed=seed,
                         uav_mode=eu.modal_action(trace, 'x_mW'),
                         jammer_mode=eu.modal_action(trace, 'y_mW'),
                         terminal_ber=float(trace.column('pe')[-config.run.window:].mean())))
    return traces, pandas.DataFrame(rows)


def at_equilibrium(cells, config):
    hit = (cells['uav_mode'] == config.radio.max_uav_power) & \
          (cells['jammer_mode'] == config.radio.max_jam_power)
    return int(hit.sum())


def run_experiment(argin):
    config = eu.load_preset('smart-jammer', run__slots=argin['slots'])
    seeds = list(range(argin['first_seed'], argin['first_seed'] + argin['seeds']))
    gains = analysis.median_gains(config)
    r = config.radio
    found = analysis.solve_stage_game(analysis.StageGame.fixed(gains, r))
    ne_ber = analysis.ne_ber_smart(r.user_power, r.max_uav_power, r.max_jam_power, gains,
                                   r.noise_power)
    eq = analysis.reference_equilibrium(config)

    traces, cells = play(config, seeds, argin['threads'])
    hits = at_equilibrium(cells, config)
    median_ber = float(numpy.median(cells['terminal_ber']))
    full = (r.max_uav_power, r.max_jam_power) in [(e.x, e.y) for e in found]
    checks = [eu.check('full power is an equilibrium', float(full), '== 1', full),
              eu.check('seeds with modal play (150, 80)', hits,
                       '>= %d of %d' % (argin['min_seeds'], len(seeds)),
                       hits >= argin['min_seeds']),
              eu.check('median terminal BER / equilibrium BER - 1',
                       abs(median_ber / ne_ber - 1), '< 0.05', abs(median_ber / ne_ber - 1) < 0.05)]
    by_label = {'drlur case 1': traces}

    if argin['with_case2']:
        noisy = config.with_values(uav__case=2, uav__noise_sigma=argin['noise_sigma']).validate()
        noisy_traces, noisy_cells = play(noisy, seeds, argin['threads'])
        noisy_hits = at_equilibrium(noisy_cells, noisy)
        noisy_ber = float(numpy.median(noisy_cells['terminal_ber']))
        degradation = noisy_ber / median_ber - 1
        checks += [eu.check('case 2 seeds with modal play (150, 80)', noisy_hits,
                            '>= %d of %d' % (argin['min_seeds_case2'], len(seeds)),
                            noisy_hits >= argin['min_seeds_case2']),
                   eu.check('case 2 BER degradation', degradation, '< 0.5', degradation < 0.5)]
        cells = pandas.concat([cells, noisy_cells], ignore_index=True)
        by_label['drlur case 2'] = noisy_traces

    return dict(checks=checks, cells=cells, ne_ber=ne_ber,
                summaries=eu.summaries(by_label, config, eq), config=argin)


def gen_parser():
    parser = argparse.ArgumentParser()
    parser.add_argument('--seeds', default=10, type=int)
    parser.add_argument('--first_seed', default=1, type=int)
    parser.add_argument('--slots', default=2000, type=int)
    parser.add_argument('--min_seeds', default=8, type=int)
    parser.add_argument('--with_case2', action='store_true')
    parser.add_argument('--noise_sigma', default=1.5, type=float)
    parser.add_argument('--min_seeds_case2', default=6, type=int)
    parser.add_argument('--threads', default=None, type=int)
    parser.add_argument('--out', default='smart_jammer_equilibrium')
    parser.add_argument('--no_plots', action='store_true')
    return parser


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO)
    args = gen_parser().parse_args()
    argsdict = eu.parser_args_to_dict(args)
    result = run_experiment(argsdict)
    print(eu.save_result(result, argsdict['out'], 'smart_jammer_equilibrium'))
    if not argsdict['no_plots']:
        eu.plot_result(result, argsdict['out'], 'smart_jammer_equilibrium')
