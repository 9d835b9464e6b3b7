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
Geometry, user mobility, per-slot channel gains and the UAV's view of them.

Link order is fixed everywhere: h1 user->BS0, h2 user->UAV, h3 jammer->BS0,
h4 jammer->UAV, h5 UAV->BS1. Gains are linear power gains drawn once per slot
from a log-normal shadowing model around a path-loss mean (geometry mode) or
around a configured median (abstract mode).
"""

import math
from dataclasses import dataclass, replace

import numpy

import aegis.settings as S
from aegis import numerics
from aegis.utils import AegisColdStartError, AegisConfigError, AegisDomainError

LINKS = S.channel.links

IDEAL = 1
NOISY_DELAYED = 2


@dataclass(frozen=True)
class Geometry:
    user_pos: tuple
    bs0_pos: tuple
    bs1_pos: tuple
    jammer_pos: tuple
    uav_pos: tuple
    cell_radius: float

    def validate(self):
        if self.uav_pos[2] <= 0:
            raise AegisConfigError('UAV altitude must be > 0, got %r.' % self.uav_pos[2])
        if self.cell_radius <= 0:
            raise AegisConfigError('Cell radius must be > 0, got %r.' % self.cell_radius)
        if distance(self.bs1_pos, self.jammer_pos) <= distance(self.bs0_pos, self.jammer_pos):
            raise AegisConfigError('BS1 must be farther from the jammer than BS0.')
        return self

    def with_user(self, user_pos):
        return replace(self, user_pos=tuple(user_pos))

    def link_distances(self):
        """ Distances in meters for h1..h5, clamped to the minimum separation. """
        pairs = [(self.user_pos, self.bs0_pos), (self.user_pos, self.uav_pos),
                 (self.jammer_pos, self.bs0_pos), (self.jammer_pos, self.uav_pos),
                 (self.uav_pos, self.bs1_pos)]
        return [max(distance(a, b), S.channel.min_distance) for a, b in pairs]


@dataclass(frozen=True)
class LinkParams:
    mean_db_at_ref: float
    pathloss_exp: float
    shadow_sigma_db: float
    ref_dist: float = 1.0

    def validate(self):
        if not 1.5 <= self.pathloss_exp <= 6:
            raise AegisConfigError('Path loss exponent must be in [1.5, 6], got %r.'
                                   % self.pathloss_exp)
        if not 0 <= self.shadow_sigma_db <= 12:
            raise AegisConfigError('Shadowing sigma must be in [0, 12] dB, got %r.'
                                   % self.shadow_sigma_db)
        if self.ref_dist <= 0:
            raise AegisConfigError('Reference distance must be > 0, got %r.' % self.ref_dist)
        return self

    def mean_db(self, dist):
        return self.mean_db_at_ref - 10.0 * self.pathloss_exp * math.log10(dist / self.ref_dist)


@dataclass(frozen=True)
class ChannelGains:
    h1: float
    h2: float
    h3: float
    h4: float
    h5: float

    def as_array(self):
        return numpy.array([self.h1, self.h2, self.h3, self.h4, self.h5])

    @classmethod
    def from_array(cls, values):
        return cls(*[float(v) for v in values])


@dataclass(frozen=True)
class UavObservation:
    est_gains: tuple
    est_jam_power: float
    slot_of_origin: int


@dataclass
class MobilityState:
    pos: numpy.ndarray
    waypoint: numpy.ndarray
    speed: float


def distance(a, b):
    a = tuple(a) + (0.0,) * (3 - len(a))
    b = tuple(b) + (0.0,) * (3 - len(b))
    return math.sqrt(sum((p - q) ** 2 for p, q in zip(a, b)))


def default_link_params(config=None):
    """ NLOS presets for the ground links, LOS presets for the links touching the UAV. """
    c = config if config is not None else S.channel
    ground = LinkParams(c.mean_db_at_ref, c.ground_pathloss_exp, c.ground_shadow_db,
                        c.ref_dist)
    air = LinkParams(c.mean_db_at_ref, c.uav_pathloss_exp, c.uav_shadow_db, c.ref_dist)
    return dict(h1=ground, h2=air, h3=ground, h4=air, h5=air)


def uniform_in_disc(center, radius, stream):
    r = radius * math.sqrt(stream.random())
    theta = 2 * math.pi * stream.random()
    return numpy.array([center[0] + r * math.cos(theta), center[1] + r * math.sin(theta)])


def init_mobility(user_pos, center, radius, speed_range, stream):
    waypoint = uniform_in_disc(center, radius, stream)
    speed = stream.uniform(speed_range[0], speed_range[1])
    return MobilityState(numpy.array(user_pos[:2], dtype=float), waypoint, speed)


def step_random_waypoint(mob_state, cell_radius, speed_range, dt, stream, center=(0.0, 0.0)):
    """
    Moves the user toward its waypoint for dt seconds. On arrival the user stops
    exactly at the waypoint and draws a fresh waypoint and speed; leftover time
    in that step is not spent.
    """
    if dt <= 0:
        raise AegisDomainError('Mobility step needs dt > 0, got %r.' % dt)
    offset = mob_state.waypoint - mob_state.pos
    remaining = float(numpy.hypot(offset[0], offset[1]))
    travel = mob_state.speed * dt
    if travel >= remaining:
        pos = mob_state.waypoint.copy()
        return MobilityState(pos, uniform_in_disc(center, cell_radius, stream),
                             stream.uniform(speed_range[0], speed_range[1]))
    pos = mob_state.pos + offset * (travel / remaining)
    return MobilityState(pos, mob_state.waypoint, mob_state.speed)


def gains_from_geometry(geom, params, stream):
    gains = []
    for link, dist in zip(LINKS, geom.link_distances()):
        p = params[link]
        gains.append(numerics.lognormal_db(stream, p.mean_db(dist), p.shadow_sigma_db))
    return ChannelGains(*gains)


def gains_abstract(mean_db, sigma_db, stream):
    """ Abstract channel mode: per-link median gain and shadowing given directly in dB. """
    return ChannelGains(*[numerics.lognormal_db(stream, mean_db[link], sigma_db[link])
                          for link in LINKS])


def normalize_observation(gains, jam_power, max_gain, max_jam_power):
    norm_gains = numpy.clip(numpy.asarray(gains, dtype=float) / max_gain, 0.0, 1.0)
    norm_jam = min(max(jam_power / max_jam_power, 0.0), 1.0)
    return norm_gains, norm_jam


def neutral_observation(max_gain, max_jam_power, slot=0):
    return UavObservation(tuple([0.5 * max_gain] * len(LINKS)), 0.5 * max_jam_power, slot)


def observe(true_gains_history, true_jam_history, k, case, noise_sigma, stream,
            max_gain=1.0, max_jam_power=S.radio.max_jam_power):
    """
    The UAV's estimate of the gains and jamming power available at slot k.

    Histories are indexed by slot, with entry 0 for slot 1. Case 1 returns
    slot k-1 exactly. Case 2 returns slot k-2 with Gaussian error added to each
    feature on its [0, 1] normalized scale, then clamped to the valid range.
    Raises AegisColdStartError when the origin slot does not exist yet.
    """
    lag = 1 if case == IDEAL else 2
    origin = k - lag
    if origin < 1 or origin > len(true_gains_history) or origin > len(true_jam_history):
        raise AegisColdStartError(k, lag + 1)
    gains = true_gains_history[origin - 1].as_array()
    jam = float(true_jam_history[origin - 1])
    if case == IDEAL or noise_sigma == 0:
        return UavObservation(tuple(float(g) for g in gains), jam, origin)
    norm_gains = gains / max_gain
    norm_jam = jam / max_jam_power
    noisy_gains = [numerics.gaussian(stream, g, noise_sigma) for g in norm_gains]
    noisy_jam = numerics.gaussian(stream, norm_jam, noise_sigma)
    # the floor keeps estimated gains strictly positive
    floor = 1e-12
    est_gains = tuple(float(min(max(g, floor), 1.0) * max_gain) for g in noisy_gains)
    est_jam = min(max(noisy_jam, 0.0), 1.0) * max_jam_power
    return UavObservation(est_gains, est_jam, origin)
