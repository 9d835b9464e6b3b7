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
Immutable scenario configuration. A ScenarioConfig is built from the flat
(section, key) -> value mapping produced by the parser, with every missing key
taken from settings.SCENARIO_SCHEMA, and validated before any slot runs.
"""

from dataclasses import dataclass, field, fields, replace

import aegis.settings as S
from aegis import channel
from aegis.nn import CnnArchitecture
from aegis.phy import RadioConfig
from aegis.utils import AegisConfigError, digest_text, format_float


@dataclass(frozen=True)
class ChannelConfig:
    mode: str = S.channel.mode
    max_gain: float = S.channel.max_gain
    mean_db: tuple = tuple(S.channel.mean_db[l] for l in S.channel.links)
    sigma_db: tuple = tuple(S.channel.sigma_db[l] for l in S.channel.links)
    cell_radius: float = S.channel.cell_radius
    user_pos: tuple = (S.channel.user_x, S.channel.user_y, 0.0)
    bs0_pos: tuple = (S.channel.bs0_x, S.channel.bs0_y, 0.0)
    bs1_pos: tuple = (S.channel.bs1_x, S.channel.bs1_y, 0.0)
    jammer_pos: tuple = (S.channel.jammer_x, S.channel.jammer_y, 0.0)
    uav_pos: tuple = (S.channel.uav_x, S.channel.uav_y, S.channel.uav_z)
    speed_range: tuple = (S.channel.speed_min, S.channel.speed_max)
    mean_db_at_ref: float = S.channel.mean_db_at_ref
    ref_dist: float = S.channel.ref_dist
    ground_pathloss_exp: float = S.channel.ground_pathloss_exp
    ground_shadow_db: float = S.channel.ground_shadow_db
    uav_pathloss_exp: float = S.channel.uav_pathloss_exp
    uav_shadow_db: float = S.channel.uav_shadow_db

    def geometry(self):
        return channel.Geometry(self.user_pos, self.bs0_pos, self.bs1_pos, self.jammer_pos,
                                self.uav_pos, self.cell_radius)

    def link_params(self):
        return channel.default_link_params(self)

    def mean_db_map(self):
        return dict(zip(channel.LINKS, self.mean_db))

    def sigma_db_map(self):
        return dict(zip(channel.LINKS, self.sigma_db))

    def validate(self):
        if self.max_gain <= 0:
            raise AegisConfigError('channel.max_gain must be > 0, got %r.' % self.max_gain)
        if any(s < 0 for s in self.sigma_db):
            raise AegisConfigError('Shadowing sigma must be >= 0 dB on every link.')
        if self.mode == 'geometry':
            self.geometry().validate()
            for params in self.link_params().values():
                params.validate()
            lo, hi = self.speed_range
            if not 0 < lo <= hi:
                raise AegisConfigError('Speed range must satisfy 0 < min <= max, got %r.'
                                       % (self.speed_range,))
            if channel.distance(self.user_pos, self.bs0_pos) > self.cell_radius:
                raise AegisConfigError('The user must start inside the BS0 cell.')
        return self


@dataclass(frozen=True)
class UavConfig:
    agent: str = S.uav.agent
    fixed_power: float = S.uav.fixed_power
    case: int = S.uav.case
    noise_sigma: float = S.uav.noise_sigma
    learning_rate: float = S.uav.learning_rate
    batch_size: int = S.uav.batch_size
    gamma: float = S.uav.gamma
    history: int = S.uav.history
    pool_capacity: int = S.uav.pool_capacity
    epsilon_start: float = S.uav.epsilon_start
    epsilon_end: float = S.uav.epsilon_end
    epsilon_decay_slots: int = S.uav.epsilon_decay_slots
    hotboot_epsilon_start: float = S.uav.hotboot_epsilon_start
    target_period: int = S.uav.target_period
    head_init_scale: float = S.uav.head_init_scale
    alpha: float = S.uav.alpha
    delta: float = S.uav.delta
    rho_bins: int = S.uav.rho_bins


@dataclass(frozen=True)
class JammerConfig:
    kind: str = S.jammer.kind
    level: float = S.jammer.level
    alpha: float = S.jammer.alpha
    gamma: float = S.jammer.gamma
    epsilon_start: float = S.jammer.epsilon_start
    epsilon_end: float = S.jammer.epsilon_end
    epsilon_decay_slots: int = S.jammer.epsilon_decay_slots
    rho_bins: int = S.jammer.rho_bins


@dataclass(frozen=True)
class RunConfig:
    slots: int = S.run.slots
    seed: int = S.run.seed
    window: int = S.run.window
    eta: float = S.run.eta
    hotboot_scenarios: int = S.run.hotboot_scenarios
    hotboot_slots: int = S.run.hotboot_slots
    hotboot_jitter_db: float = S.run.hotboot_jitter_db
    hotboot_jitter_pos: float = S.run.hotboot_jitter_pos


def _check_unit(name, value, lo=0.0, hi=1.0):
    if not lo <= value <= hi:
        raise AegisConfigError('%s must be in [%r, %r], got %r.' % (name, lo, hi, value))


@dataclass(frozen=True)
class ScenarioConfig:
    radio: RadioConfig = field(default_factory=RadioConfig)
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    uav: UavConfig = field(default_factory=UavConfig)
    jammer: JammerConfig = field(default_factory=JammerConfig)
    run: RunConfig = field(default_factory=RunConfig)

    def validate(self):
        self.radio.validate()
        self.channel.validate()
        u, j, r = self.uav, self.jammer, self.run
        if u.agent not in S.uav.agents:
            raise AegisConfigError('Unknown UAV agent %r.' % u.agent)
        if j.kind not in S.jammer.kinds:
            raise AegisConfigError('Unknown jammer kind %r.' % j.kind)
        if u.case not in (channel.IDEAL, channel.NOISY_DELAYED):
            raise AegisConfigError('Observation case must be 1 or 2, got %r.' % u.case)
        if u.noise_sigma < 0:
            raise AegisConfigError('uav.noise_sigma must be >= 0, got %r.' % u.noise_sigma)
        if u.learning_rate <= 0 or u.batch_size < 1 or u.history < 1 or u.pool_capacity < 1:
            raise AegisConfigError('UAV learning parameters must be positive.')
        if not 0 <= u.gamma < 1 or not 0 <= j.gamma < 1:
            raise AegisConfigError('Discount factors must be in [0, 1).')
        for owner, cfg in (('uav', u), ('jammer', j)):
            _check_unit('%s.epsilon_start' % owner, cfg.epsilon_start)
            _check_unit('%s.epsilon_end' % owner, cfg.epsilon_end)
            _check_unit('%s.alpha' % owner, cfg.alpha, 1e-12, 1.0)
            if cfg.rho_bins < 1 or cfg.epsilon_decay_slots < 0:
                raise AegisConfigError('%s.rho_bins must be >= 1 and the decay slots >= 0.'
                                       % owner)
        _check_unit('uav.hotboot_epsilon_start', u.hotboot_epsilon_start)
        _check_unit('uav.delta', u.delta, 1e-12, 1.0)
        if u.target_period < 0:
            raise AegisConfigError('uav.target_period must be >= 0.')
        if u.head_init_scale < 0:
            raise AegisConfigError('uav.head_init_scale must be >= 0, got %r.'
                                   % u.head_init_scale)
        self._check_on_grid('uav.fixed_power', u.fixed_power, self.radio.max_uav_power,
                            self.radio.uav_power_step)
        self._check_on_grid('jammer.level', j.level, self.radio.max_jam_power,
                            self.radio.jam_power_step)
        if u.agent == 'drlur':
            arch = CnnArchitecture()
            if self.uav_levels() != arch.r2:
                raise AegisConfigError('The UAV grid has %d levels but the CNN has %d outputs.'
                                       % (self.uav_levels(), arch.r2))
            if 10 * u.history - 1 > arch.n1 ** 2:
                raise AegisConfigError('uav.history %d does not fit a %dx%d input.'
                                       % (u.history, arch.n1, arch.n1))
        if r.slots < 0 or r.window < 1 or r.eta <= 0:
            raise AegisConfigError('run.slots must be >= 0, run.window >= 1 and run.eta > 0.')
        if r.hotboot_scenarios < 0 or r.hotboot_slots < 1:
            raise AegisConfigError('Hotboot needs scenarios >= 0 and slots >= 1.')
        return self

    @staticmethod
    def _check_on_grid(name, value, maximum, step):
        ratio = value / step
        if not 0 <= value <= maximum or abs(ratio - round(ratio)) > 1e-9:
            raise AegisConfigError('%s = %r is not on the 0..%r grid with step %r.'
                                   % (name, value, maximum, step))

    def uav_levels(self):
        return int(round(self.radio.max_uav_power / self.radio.uav_power_step)) + 1

    def with_values(self, **overrides):
        """ Copy with overrides given as section__key=value. """
        sections = {}
        for name, value in overrides.items():
            section, key = name.split('__', 1)
            sections.setdefault(section, {})[key] = value
        return replace(self, **{s: replace(getattr(self, s), **kv) for s, kv in sections.items()})

    def to_text(self):
        """ Canonical scenario text, one key per line in schema order. """
        return ''.join('%s.%s = %s\n' % (section, key, render_value(value))
                       for section, key, value in flatten(self))

    def digest(self):
        return digest_text(self.to_text())


def render_value(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def _section_values(config):
    """ Flat {(section, key): value} view of a config, named as in the scenario schema. """
    c = config.channel
    values = {('radio', f.name): getattr(config.radio, f.name) for f in fields(config.radio)}
    for f in fields(c):
        if f.name in ('mean_db', 'sigma_db'):
            for link, v in zip(channel.LINKS, getattr(c, f.name)):
                values[('channel', '%s_%s' % (link, f.name))] = v
        elif f.name.endswith('_pos'):
            prefix = f.name[:-4]
            for axis, v in zip('xyz', getattr(c, f.name)):
                values[('channel', '%s_%s' % (prefix, axis))] = v
        elif f.name == 'speed_range':
            values[('channel', 'speed_min')], values[('channel', 'speed_max')] = c.speed_range
        else:
            values[('channel', f.name)] = getattr(c, f.name)
    for section in ('uav', 'jammer', 'run'):
        part = getattr(config, section)
        values.update({(section, f.name): getattr(part, f.name) for f in fields(part)})
    return values


def flatten(config):
    values = _section_values(config)
    return [(section, key, values[(section, key)]) for section, key, _, _, _ in S.SCENARIO_SCHEMA]


def from_values(values):
    """ ScenarioConfig from a {(section, key): value} mapping; missing keys take defaults. """
    merged = {(section, key): default for section, key, _, default, _ in S.SCENARIO_SCHEMA}
    for name in values:
        if name not in merged:
            raise AegisConfigError('Unknown scenario key %s.%s.' % name)
    merged.update(values)

    def section(name, cls):
        return cls(**{f.name: merged[(name, f.name)] for f in fields(cls)})

    def pos(prefix, z=0.0):
        return (merged[('channel', prefix + '_x')], merged[('channel', prefix + '_y')], z)

    scalar = {f.name for f in fields(ChannelConfig)} & {k for s, k in merged if s == 'channel'}
    channel_config = ChannelConfig(
        mean_db=tuple(merged[('channel', '%s_mean_db' % l)] for l in channel.LINKS),
        sigma_db=tuple(merged[('channel', '%s_sigma_db' % l)] for l in channel.LINKS),
        user_pos=pos('user'), bs0_pos=pos('bs0'), bs1_pos=pos('bs1'),
        jammer_pos=pos('jammer'), uav_pos=pos('uav', merged[('channel', 'uav_z')]),
        speed_range=(merged[('channel', 'speed_min')], merged[('channel', 'speed_max')]),
        **{k: merged[('channel', k)] for k in scalar})
    return ScenarioConfig(radio=section('radio', RadioConfig), channel=channel_config,
                          uav=section('uav', UavConfig), jammer=section('jammer', JammerConfig),
                          run=section('run', RunConfig))


def default_config():
    return from_values({})
