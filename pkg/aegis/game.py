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
The slot loop binding channels, PHY and agents into episodes.

Each slot runs the same ordered phases:

  1. user mobility step (geometry mode)
  2. true gains of the slot are drawn
  3. the jammer acts on what it saw in slot k-1
  4. the UAV acts on s(k), assembled at the end of slot k-1
  5. PHY: BER vector, message BER, utilities and energy from slot-k truths
  6. both learners update with the slot-k reward; the UAV's next state uses
     the observation available at slot k+1
  7. the slot is recorded

Every stochastic component draws from its own stream split off the run's root
stream, so adding draws in one component never shifts another.
"""

import logging
import multiprocessing
import os
from dataclasses import dataclass, field

import numpy

import aegis.settings as S
from aegis import agents, channel, data_utils, jammers, phy
from aegis.numerics import RandomStream
from aegis.persistence_layer import PersistenceLayer
from aegis.utils import AegisColdStartError, AegisConfigError, check_finite

logger = logging.getLogger(__name__)

STREAMS = ('mobility', 'channel', 'observe', 'uav', 'jammer', 'init')


@dataclass(frozen=True)
class SlotRecord:
    slot: int
    x_mW: float
    y_mW: float
    rho1: float
    rho2: float
    rho3: float
    pe: float
    u_uav: float
    u_jam: float
    energy_mJ: float
    eps: float
    h1: float
    h2: float
    h3: float
    h4: float
    h5: float


@dataclass
class Trace:
    config_digest: str
    seed: int
    agent: str
    records: list = field(default_factory=list)
    artifact_digest: str = ''

    def column(self, name):
        return numpy.array([getattr(r, name) for r in self.records], dtype=float)

    def csv_text(self):
        return data_utils.trace_csv_text(self.records)

    def write_csv(self, path):
        return data_utils.write_trace_csv(path, self.records)

    def __len__(self):
        return len(self.records)


class World(object):
    """
    Everything one episode owns: configuration, streams, agents, the user's
    mobility state and the true histories the UAV's observations are read from.
    """

    def __init__(self, config, uav_agent=None, jammer=None, artifact=None, stream=None):
        self.config = config.validate()
        root = stream if stream is not None else RandomStream(config.run.seed)
        self.streams = {name: root.split(name) for name in STREAMS}
        self.radio = config.radio
        c = config.channel
        self.max_gain = c.max_gain
        self.uav = uav_agent if uav_agent is not None else \
            agents.make_agent(config, self.streams['init'], artifact=artifact)
        self.jammer = jammer if jammer is not None else jammers.make_jammer(config)
        self.uav.begin_episode()
        self.geometry = None
        self.mobility = None
        if c.mode == 'geometry':
            self.geometry = c.geometry()
            self.link_params = c.link_params()
            self.mobility = channel.init_mobility(c.user_pos, c.bs0_pos, c.cell_radius,
                                                  c.speed_range, self.streams['mobility'])
        else:
            self.mean_db = c.mean_db_map()
            self.sigma_db = c.sigma_db_map()
        self.gains_history = []
        self.jam_history = []
        self.rho_prev = agents.NEUTRAL_RHO
        self.relayed_prev = False
        self.next_state = agents.neutral_state(self.max_gain, self.radio.max_jam_power)
        self.k = 0

    def sample_gains(self):
        if self.geometry is not None:
            self.mobility = channel.step_random_waypoint(
                self.mobility, self.geometry.cell_radius, self.config.channel.speed_range,
                self.radio.slot_duration, self.streams['mobility'],
                center=self.geometry.bs0_pos[:2])
            self.geometry = self.geometry.with_user(tuple(self.mobility.pos) + (0.0,))
            return channel.gains_from_geometry(self.geometry, self.link_params,
                                               self.streams['channel'])
        return channel.gains_abstract(self.mean_db, self.sigma_db, self.streams['channel'])

    def observation_for(self, k):
        """ The UAV's view at slot k, neutral until the history reaches back far enough. """
        u = self.config.uav
        try:
            return channel.observe(self.gains_history, self.jam_history, k, u.case,
                                   u.noise_sigma, self.streams['observe'], self.max_gain,
                                   self.radio.max_jam_power)
        except AegisColdStartError:
            return channel.neutral_observation(self.max_gain, self.radio.max_jam_power, k - 1)


def run_slot(world, k):
    r = world.radio
    # phases 1-2
    gains = world.sample_gains()
    check_finite('channel gain', gains.as_array(), k)
    # phase 3
    j_index = world.jammer.act(k, world.rho_prev[0], world.relayed_prev, world.streams['jammer'])
    y = world.jammer.grid.power(j_index)
    # phase 4
    state = world.next_state
    x_index = world.uav.act(k, state, world.streams['uav'])
    x = world.uav.grid.power(x_index)
    eps = world.uav.last_epsilon
    # phase 5
    sigma = r.noise_power
    rho = phy.ber_vector(r.user_power, x, y, gains, sigma)
    pe = phy.message_ber(r.user_power, x, y, gains, sigma)
    u_uav = phy.uav_utility(r.user_power, x, y, gains, sigma, r.relay_cost)
    u_jam = phy.jammer_utility(u_uav, y, r.jam_cost)
    energy = phy.slot_energy(r.user_power, x, r.slot_duration)
    check_finite('slot utility', [pe, u_uav, u_jam, energy], k)
    # phase 6
    world.gains_history.append(gains)
    world.jam_history.append(y)
    world.next_state = agents.make_state(rho, world.observation_for(k + 1), world.max_gain,
                                         r.max_jam_power)
    world.uav.learn(k, u_uav, world.next_state, world.streams['uav'])
    world.jammer.learn(k, u_jam, rho[0])
    world.rho_prev = rho
    world.relayed_prev = x > 0
    world.k = k
    # phase 7
    record = SlotRecord(k, float(x), float(y), float(rho[0]), float(rho[1]), float(rho[2]),
                        float(pe), float(u_uav), float(u_jam), float(energy), float(eps),
                        *[float(g) for g in gains.as_array()])
    logger.debug('slot %d: x=%g y=%g pe=%.6g', k, x, y, pe)
    return record


def run_episode(config, artifact=None, hotboot_dir=None, world=None):
    """
    Runs config.run.slots slots and returns the trace. Pretrained artifacts
    come either directly (`artifact`) or from a hotboot store directory.
    """
    config.validate()
    kind = config.uav.agent
    if artifact is None and hotboot_dir is not None and kind != 'fixed':
        artifact = PersistenceLayer(hotboot_dir).load(kind, config)
        if artifact is None:
            logger.warning('no %s hotboot artifact for this scenario in %s; fresh init',
                           kind, hotboot_dir)
    elif artifact is None and kind == 'drlur':
        logger.info('no hotboot directory given; DRLUR starts from fresh weights')
    world = world if world is not None else World(config, artifact=artifact)
    trace = Trace(config.digest(), config.run.seed, kind)
    for k in range(1, config.run.slots + 1):
        trace.records.append(run_slot(world, k))
    trace.artifact_digest = world.uav.artifact_digest()
    logger.info('episode done: agent=%s seed=%d slots=%d', kind, config.run.seed,
                config.run.slots)
    return trace


def _run_seed(job):
    config, seed, hotboot_dir = job
    return run_episode(config.with_values(run__seed=seed), hotboot_dir=hotboot_dir)


def thread_count(requested=None):
    if requested is not None:
        return max(1, int(requested))
    value = os.environ.get(S.env.threads_var)
    if value:
        try:
            return max(1, int(value))
        except ValueError:
            raise AegisConfigError('%s must be an integer, got %r.' % (S.env.threads_var, value))
    return 1


def run_batch(config, seeds, threads=None, hotboot_dir=None):
    """
    One independent episode per seed, returned in the order of `seeds`.
    Runs share no state, so a pool of processes gives the same traces as a
    sequential loop.
    """
    seeds = list(seeds)
    if len(set(seeds)) != len(seeds):
        raise AegisConfigError('Batch seeds must be distinct, got %s.' % seeds)
    config.validate()
    jobs = [(config, seed, hotboot_dir) for seed in seeds]
    n = min(thread_count(threads), len(jobs)) if jobs else 1
    if n <= 1:
        return [_run_seed(job) for job in jobs]
    logger.info('running %d episodes on %d processes', len(jobs), n)
    with multiprocessing.Pool(n) as pool:
        return pool.map(_run_seed, jobs)
