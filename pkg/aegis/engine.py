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
import os

import numpy
import pandas

from aegis import analysis, data_utils, game, hotboot, selftest
from aegis.persistence_layer import PersistenceLayer
from aegis.utils import AegisConfigError

logger = logging.getLogger(__name__)


class Engine(object):
    """
    The operations behind every command. Each method takes validated inputs
    and returns a dict the client knows how to print.
    """

    def pretrain(self, config, out_dir, scenarios, slots, seed):
        store = PersistenceLayer(out_dir)
        config = config.with_values(run__seed=seed, run__hotboot_scenarios=scenarios,
                                    run__hotboot_slots=slots).validate()
        artifact = hotboot.hotboot(config, scenarios, slots, seed, store=None)
        if artifact is None:
            return dict(message='Nothing pretrained (0 scenarios); no file written.',
                        artifacts=[])
        path, digest = store.save(config.uav.agent, config, artifact)
        return dict(message='Pretrained %s over %d x %d slots.'
                    % (config.uav.agent, scenarios, slots),
                    artifacts=[dict(path=path, digest=digest)])

    def reference(self, config):
        eq = analysis.reference_equilibrium(config)
        logger.info('reference equilibrium x=%g y=%g utility=%.6g ber=%.6g',
                    eq.x, eq.y, eq.u_uav, eq.ber)
        return eq

    def run(self, config, out_path, hotboot_dir=None):
        config.validate()
        trace = game.run_episode(config, hotboot_dir=hotboot_dir)
        eq = self.reference(config)
        summary = analysis.summarize(trace, config.run.window, eq.u_uav, eq.ber, config.run.eta)
        out_dir = os.path.dirname(os.path.abspath(out_path))
        data_utils.ensure_dir(out_dir)
        trace.write_csv(out_path)
        name = os.path.splitext(os.path.basename(out_path))[0]
        report = analysis.describe(summary)
        paths = analysis.write_summary(out_dir, name, summary, report)
        return dict(message='Wrote %d slots to %s.' % (len(trace), out_path),
                    report=report, trace=trace, summary=summary,
                    paths=[out_path] + paths, digest=trace.artifact_digest)

    def sweep(self, config, agents, seeds, out_dir, hotboot_dir=None, threads=None):
        """
        Every agent on every seed. Writes one trace per cell, aggregate.csv with
        per-agent medians, report.txt and a median MA-BER curve per agent.
        """
        config.validate()
        if not agents:
            raise AegisConfigError('A sweep needs at least one agent.')
        data_utils.ensure_dir(out_dir)
        eq = self.reference(config)
        rows, paths = [], []
        for agent in agents:
            cell_config = config.with_values(uav__agent=agent).validate()
            traces = game.run_batch(cell_config, seeds, threads=threads, hotboot_dir=hotboot_dir)
            curves, energies = [], []
            for seed, trace in zip(seeds, traces):
                path = os.path.join(out_dir, '%s-seed%d.csv' % (agent, seed))
                paths.append(trace.write_csv(path))
                summary = analysis.summarize(trace, config.run.window, eq.u_uav, eq.ber,
                                             config.run.eta)
                row = analysis.summary_row(agent, summary)
                row['seed'] = seed
                rows.append(row)
                curves.append(summary.ma_ber)
                energies.append(summary.cumulative_energy)
            if curves and len(curves[0]):
                median = numpy.median(numpy.vstack(curves), axis=0)
                slots = numpy.arange(1, len(median) + 1)
                valid = ~numpy.isnan(median)
                paths.append(data_utils.write_dat(os.path.join(out_dir, '%s-ber.dat' % agent),
                                                  slots[valid], median[valid]))
                energy = numpy.median(numpy.vstack(energies), axis=0)
                paths.append(data_utils.write_dat(os.path.join(out_dir, '%s-energy.dat' % agent),
                                                  slots, energy))
        cells = pandas.DataFrame(rows)
        agg = analysis.aggregate(rows)
        paths.append(data_utils.write_frame_csv(os.path.join(out_dir, 'aggregate.csv'), agg))
        report = analysis.format_summary(
            agg, 'Medians over %d seeds (equilibrium x=%g mW, y=%g mW, BER %.6g)'
            % (len(seeds), eq.x, eq.y, eq.ber))
        paths.append(data_utils.atomic_write_text(os.path.join(out_dir, 'report.txt'),
                                                  report + '\n'))
        return dict(message='Swept %d agents x %d seeds into %s.' % (len(agents), len(seeds),
                                                                   out_dir),
                    report=report, aggregate=agg, cells=cells, paths=paths)

    def selftest(self, gradient_fn=None, qpsk_symbols=None):
        kwargs = {} if qpsk_symbols is None else dict(qpsk_symbols=qpsk_symbols)
        checks = selftest.run_selftest(gradient_fn=gradient_fn, **kwargs)
        return dict(checks=checks, passed=all(c.passed for c in checks))
