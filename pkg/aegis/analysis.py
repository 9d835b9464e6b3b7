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
Closed-form equilibrium BERs, a brute-force solver for the one-slot relay
game, and the metrics computed from traces: moving-average BER, energy,
convergence slot and the gap to the equilibrium BER.
"""

import logging
import math
import os
from dataclasses import dataclass

import numpy
import pandas
import prettytable

import aegis.settings as S
from aegis import channel, data_utils, numerics, phy
from aegis.agents import ActionGrid
from aegis.utils import AegisDomainError, AegisStructuralError, format_float

logger = logging.getLogger(__name__)

BEST_RESPONSE_TOLERANCE = 1e-12


def ne_ber_weak(P, h1, sigma):
    """ BER when neither the UAV relays nor the jammer jams. """
    if P <= 0 or sigma <= 0 or h1 < 0:
        raise AegisDomainError('ne_ber_weak needs P > 0, sigma > 0 and h1 >= 0.')
    return 0.5 * numerics.erfc(math.sqrt(P * h1 / sigma))


def ne_ber_smart(P, max_uav_power, max_jam_power, h, sigma):
    """ BER when the UAV relays at full power against full-power jamming. """
    if P <= 0 or sigma <= 0:
        raise AegisDomainError('ne_ber_smart needs P > 0 and sigma > 0.')
    direct = math.sqrt(P * h.h1 / (sigma + h.h3 * max_jam_power))
    hop1 = math.sqrt(P * h.h2 / (sigma + h.h4 * max_jam_power))
    hop2 = math.sqrt(max_uav_power * h.h5 / sigma)
    return 0.5 * numerics.erfc(max(direct, min(hop1, hop2)))


@dataclass
class StageGame:
    """
    The relay game of one slot. With a single gain vector the channel is
    fixed; with an ensemble, utilities are averaged over it (the expected game).
    """
    gains: numpy.ndarray
    radio: phy.RadioConfig
    uav_levels: tuple
    jam_levels: tuple

    @classmethod
    def fixed(cls, gains, radio, uav_levels=None, jam_levels=None):
        return cls(numpy.atleast_2d(gains.as_array()), radio,
                   tuple(uav_levels if uav_levels is not None else _grid(radio, 'uav')),
                   tuple(jam_levels if jam_levels is not None else _grid(radio, 'jam')))

    def validate(self):
        if not self.uav_levels or not self.jam_levels:
            raise AegisStructuralError('Stage game grids must be non-empty.')
        if self.gains.ndim != 2 or self.gains.shape[1] != len(channel.LINKS):
            raise AegisStructuralError('Stage game gains must be an (n, 5) array.')
        return self

    def utilities(self):
        """ (expected message BER, u_uav, u_jam), each indexed [uav level, jam level]. """
        r = self.radio
        xs = numpy.asarray(self.uav_levels, dtype=float)
        ys = numpy.asarray(self.jam_levels, dtype=float)
        pe = phy.message_ber_grid(r.user_power, xs, ys, self.gains, r.noise_power).mean(axis=0)
        u_uav = -pe - xs[:, None] * r.relay_cost
        u_jam = -u_uav - ys[None, :] * r.jam_cost
        return pe, u_uav, u_jam


def _grid(radio, who):
    if who == 'uav':
        return ActionGrid.uniform(radio.max_uav_power, radio.uav_power_step).levels
    return ActionGrid.uniform(radio.max_jam_power, radio.jam_power_step).levels


@dataclass(frozen=True)
class Equilibrium:
    x: float
    y: float
    u_uav: float
    u_jam: float
    ber: float


def solve_stage_game(game):
    """
    Every pure Nash equilibrium on the grids, found by checking each pair for
    mutual best response. Sorted by (x, y); possibly empty.
    """
    game.validate()
    pe, u_uav, u_jam = game.utilities()
    uav_best = u_uav >= u_uav.max(axis=0, keepdims=True) - BEST_RESPONSE_TOLERANCE
    jam_best = u_jam >= u_jam.max(axis=1, keepdims=True) - BEST_RESPONSE_TOLERANCE
    found = []
    for i, j in zip(*numpy.nonzero(uav_best & jam_best)):
        found.append(Equilibrium(float(game.uav_levels[i]), float(game.jam_levels[j]),
                                 float(u_uav[i, j]), float(u_jam[i, j]), float(pe[i, j])))
    return sorted(found, key=lambda e: (e.x, e.y))


def best_response_jammer(game, x):
    """ Jamming power maximizing u_J against relay power x (lowest on ties). """
    _, _, u_jam = game.utilities()
    i = list(game.uav_levels).index(x)
    return float(game.jam_levels[int(numpy.argmax(u_jam[i]))])


def sample_stage_game(config, n_samples, stream):
    """ Expected stage game over n_samples gain draws from the scenario's channel model. """
    c = config.channel
    draws = []
    if c.mode == 'geometry':
        geom = c.geometry()
        params = c.link_params()
        for _ in range(n_samples):
            draws.append(channel.gains_from_geometry(geom, params, stream).as_array())
    else:
        mean_db, sigma_db = c.mean_db_map(), c.sigma_db_map()
        if not any(sigma_db.values()):
            n_samples = 1
        for _ in range(n_samples):
            draws.append(channel.gains_abstract(mean_db, sigma_db, stream).as_array())
    return StageGame(numpy.array(draws), config.radio, _grid(config.radio, 'uav'),
                     _grid(config.radio, 'jam'))


def median_gains(config):
    c = config.channel
    if c.mode == 'geometry':
        params = c.link_params()
        return channel.ChannelGains(*[numerics.db_to_linear(params[l].mean_db(d))
                                      for l, d in zip(channel.LINKS,
                                                      c.geometry().link_distances())])
    return channel.ChannelGains(*[numerics.db_to_linear(v) for v in c.mean_db])


def reference_equilibrium(config, n_samples=200, seed=None):
    """
    The equilibrium learning curves are measured against: of the expected
    game's pure NE, the one best for the UAV. Falls back to the UAV's max-min
    play when the grid game has no pure NE.
    """
    seed = config.run.seed if seed is None else seed
    stream = numerics.RandomStream(seed).split('stage-game')
    game = sample_stage_game(config, n_samples, stream)
    found = solve_stage_game(game)
    if found:
        return max(found, key=lambda e: (e.u_uav, -e.x))
    logger.warning('no pure equilibrium on the grid; using the max-min relay power')
    pe, u_uav, u_jam = game.utilities()
    worst = u_uav.min(axis=1)
    i = int(numpy.argmax(worst))
    j = int(numpy.argmin(u_uav[i]))
    return Equilibrium(float(game.uav_levels[i]), float(game.jam_levels[j]), float(u_uav[i, j]),
                       float(u_jam[i, j]), float(pe[i, j]))


def moving_average(values, window):
    """ Trailing mean over `window` slots; undefined (NaN) before slot `window`. """
    return pandas.Series(numpy.asarray(values, dtype=float)).rolling(window).mean().to_numpy()


@dataclass
class RunSummary:
    slots: int
    window: int
    ma_ber: numpy.ndarray
    ma_utility: numpy.ndarray
    energy: numpy.ndarray
    cumulative_energy: numpy.ndarray
    convergence_slot: object
    terminal_ber: float
    ne_value: float
    ne_ber: float
    ne_gap: float

    @property
    def converged(self):
        return self.convergence_slot is not None

    def at(self, series, slot):
        """ Value of a per-slot series at a 1-based slot, clamped to the trace. """
        values = getattr(self, series)
        if len(values) == 0:
            return float('nan')
        return float(values[min(max(slot, 1), len(values)) - 1])


def _columns(trace):
    if isinstance(trace, pandas.DataFrame):
        return {c: trace[c].to_numpy(dtype=float) for c in ('pe', 'u_uav', 'energy_mJ')}
    return {c: trace.column(c) for c in ('pe', 'u_uav', 'energy_mJ')}


def summarize(trace, window, ne_value, ne_ber=float('nan'), eta=S.run.eta):
    """
    Convergence slot: the first slot k from which the window mean utility stays
    within eta * |ne_value| of ne_value until the end of the trace. A window
    longer than the trace shrinks to the whole trace.
    """
    if window < 1:
        raise AegisDomainError('Moving-average window must be >= 1, got %r.' % window)
    cols = _columns(trace)
    n = len(cols['pe'])
    w = min(window, n) if n else window
    ma_ber = moving_average(cols['pe'], w) if n else numpy.zeros(0)
    ma_u = moving_average(cols['u_uav'], w) if n else numpy.zeros(0)
    energy = cols['energy_mJ']
    convergence = None
    if n:
        inside = numpy.abs(ma_u - ne_value) <= eta * abs(ne_value)
        inside[:w - 1] = False
        outside = numpy.nonzero(~inside)[0]
        first = 0 if outside.size == 0 else int(outside[-1]) + 1
        if first < n:
            convergence = first + 1
    terminal = float(ma_ber[-1]) if n else float('nan')
    return RunSummary(slots=n, window=w, ma_ber=ma_ber, ma_utility=ma_u, energy=energy,
                      cumulative_energy=numpy.cumsum(energy), convergence_slot=convergence,
                      terminal_ber=terminal, ne_value=ne_value, ne_ber=ne_ber,
                      ne_gap=abs(terminal - ne_ber))


def summary_row(name, summary, ber_slot=1000, energy_slot=1500):
    return dict(agent=name,
                ber_at=summary.at('ma_ber', ber_slot),
                energy_at=summary.at('cumulative_energy', energy_slot),
                convergence_slot=(float(summary.convergence_slot) if summary.converged
                                  else float('inf')),
                terminal_ber=summary.terminal_ber,
                ne_gap=summary.ne_gap)


def aggregate(rows):
    """ Per-agent medians of the summary rows of a sweep. """
    frame = pandas.DataFrame(rows).drop(columns=['seed'], errors='ignore')
    if frame.empty:
        return frame
    grouped = frame.groupby('agent', sort=False)
    out = grouped.median(numeric_only=True)
    out.insert(0, 'seeds', grouped.size())
    return out.reset_index()


def _cell(value):
    if isinstance(value, float):
        if math.isinf(value):
            return 'not converged'
        return '%.6g' % value
    return value


def format_summary(frame, title=None):
    """ A prettytable rendering of summary rows or of a sweep aggregate. """
    frame = pandas.DataFrame(frame)
    table = prettytable.PrettyTable(list(frame.columns))
    for row in frame.itertuples(index=False):
        table.add_row([_cell(v) for v in row])
    text = table.get_string()
    if title:
        text = title + '\n' + text
    return text


def write_summary(out_dir, name, summary, report=None):
    """ Writes <name>-ber.dat, <name>-energy.dat and, when given, <name>-report.txt. """
    data_utils.ensure_dir(out_dir)
    slots = numpy.arange(1, summary.slots + 1)
    valid = ~numpy.isnan(summary.ma_ber)
    paths = [data_utils.write_dat(os.path.join(out_dir, '%s-ber.dat' % name),
                                  slots[valid], summary.ma_ber[valid]),
             data_utils.write_dat(os.path.join(out_dir, '%s-energy.dat' % name),
                                  slots, summary.cumulative_energy)]
    if report is not None:
        paths.append(data_utils.atomic_write_text(
            os.path.join(out_dir, '%s-report.txt' % name), report))
    return paths


def describe(summary):
    lines = [('slots', summary.slots), ('window', summary.window),
             ('terminal MA-BER', format_float(summary.terminal_ber)),
             ('equilibrium BER', format_float(summary.ne_ber)),
             ('equilibrium gap', format_float(summary.ne_gap)),
             ('equilibrium utility', format_float(summary.ne_value)),
             ('convergence slot', summary.convergence_slot if summary.converged
              else 'not converged'),
             ('total energy (mJ)', format_float(summary.cumulative_energy[-1])
              if summary.slots else '0.0')]
    table = prettytable.PrettyTable(['metric', 'value'])
    table.align = 'l'
    for row in lines:
        table.add_row(row)
    return table.get_string()
