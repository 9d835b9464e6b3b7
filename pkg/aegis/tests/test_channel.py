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

import math

import numpy
import pytest

from aegis import channel, numerics
from aegis.channel import ChannelGains, Geometry, LinkParams
from aegis.numerics import RandomStream
from aegis.utils import AegisColdStartError, AegisConfigError, AegisDomainError


def make_geometry(**kwargs):
    values = dict(user_pos=(100.0, 0.0, 0.0), bs0_pos=(0.0, 0.0, 0.0), bs1_pos=(600.0, 0.0, 0.0),
                  jammer_pos=(40.0, 30.0, 0.0), uav_pos=(300.0, 0.0, 100.0), cell_radius=200.0)
    values.update(kwargs)
    return Geometry(**values)


def test_geometry_validation():
    make_geometry().validate()
    with pytest.raises(AegisConfigError):
        make_geometry(uav_pos=(300.0, 0.0, 0.0)).validate()
    with pytest.raises(AegisConfigError):
        make_geometry(bs1_pos=(40.0, 40.0, 0.0)).validate()


def test_link_distances_are_clamped():
    geom = make_geometry(user_pos=(0.0, 0.0, 0.0))
    assert geom.link_distances()[0] == 1.0


def test_link_params_ranges():
    with pytest.raises(AegisConfigError):
        LinkParams(-30.0, 1.0, 3.0).validate()
    with pytest.raises(AegisConfigError):
        LinkParams(-30.0, 2.0, 13.0).validate()


def test_zero_speed_never_moves():
    stream = RandomStream(1)
    state = channel.init_mobility((50.0, 20.0, 0.0), (0.0, 0.0), 200.0, (0.0, 0.0), stream)
    start = state.pos.copy()
    for _ in range(100):
        state = channel.step_random_waypoint(state, 200.0, (0.0, 0.0), 1.0, stream)
    assert numpy.array_equal(state.pos, start)


def test_arrival_at_waypoint():
    stream = RandomStream(2)
    state = channel.MobilityState(numpy.array([0.0, 0.0]), numpy.array([10.0, 0.0]), 5.0)
    state = channel.step_random_waypoint(state, 200.0, (5.0, 5.0), 1.0, stream)
    assert numpy.allclose(state.pos, [5.0, 0.0])
    state = channel.step_random_waypoint(state, 200.0, (5.0, 5.0), 1.0, stream)
    assert numpy.array_equal(state.pos, [10.0, 0.0])


def test_mobility_stays_in_cell():
    stream = RandomStream(3)
    state = channel.init_mobility((100.0, 0.0, 0.0), (0.0, 0.0), 200.0, (1.0, 10.0), stream)
    worst = 0.0
    for _ in range(100000):
        state = channel.step_random_waypoint(state, 200.0, (1.0, 10.0), 1.0, stream)
        worst = max(worst, math.hypot(*state.pos))
    assert worst <= 200.0 + 1e-9


def test_mobility_rejects_bad_dt():
    stream = RandomStream(4)
    state = channel.init_mobility((0.0, 0.0, 0.0), (0.0, 0.0), 200.0, (1.0, 2.0), stream)
    with pytest.raises(AegisDomainError):
        channel.step_random_waypoint(state, 200.0, (1.0, 2.0), 0.0, stream)


def test_gains_at_reference_distance():
    params = {l: LinkParams(-30.0, 2.0, 0.0, ref_dist=1.0) for l in channel.LINKS}
    geom = make_geometry()
    gains = channel.gains_from_geometry(geom, params, RandomStream(5))
    for gain, dist in zip(gains.as_array(), geom.link_distances()):
        assert gain == pytest.approx(10 ** (-3.0) / dist ** 2)


def test_inverse_square():
    assert 10 ** (LinkParams(0.0, 2.0, 0.0).mean_db(2.0) / 10) == pytest.approx(0.25)


def test_uav_links_beat_ground_links_on_average():
    params = channel.default_link_params()
    stream = RandomStream(6)
    d = 200.0
    ground, air = params['h1'], params['h2']
    h1 = numpy.mean([numerics.lognormal_db(stream, ground.mean_db(d), ground.shadow_sigma_db)
                     for _ in range(10000)])
    h2 = numpy.mean([numerics.lognormal_db(stream, air.mean_db(d), air.shadow_sigma_db)
                     for _ in range(10000)])
    assert h2 > h1


def test_abstract_gains_without_shadowing():
    mean_db = dict(h1=-20.0, h2=0.0, h3=-10.0, h4=-30.0, h5=-3.0)
    sigma_db = dict.fromkeys(channel.LINKS, 0.0)
    gains = channel.gains_abstract(mean_db, sigma_db, RandomStream(1))
    assert gains.as_array() == pytest.approx([0.01, 1.0, 0.1, 0.001, 10 ** -0.3])


def history(n):
    gains = [ChannelGains(0.1 * k, 0.2, 0.3, 0.4, 0.5) for k in range(1, n + 1)]
    jams = [5.0 * k for k in range(1, n + 1)]
    return gains, jams


def test_observe_ideal_returns_previous_slot():
    gains, jams = history(5)
    obs = channel.observe(gains, jams, 4, channel.IDEAL, 1.5, RandomStream(1))
    assert obs.slot_of_origin == 3
    assert obs.est_gains == tuple(gains[2].as_array())
    assert obs.est_jam_power == 15.0


def test_observe_delayed_without_noise_is_exact():
    gains, jams = history(5)
    obs = channel.observe(gains, jams, 4, channel.NOISY_DELAYED, 0.0, RandomStream(1))
    assert obs.slot_of_origin == 2
    assert obs.est_gains == tuple(gains[1].as_array())
    assert obs.est_jam_power == 10.0


def test_observe_cold_start():
    gains, jams = history(1)
    with pytest.raises(AegisColdStartError):
        channel.observe(gains, jams, 1, channel.IDEAL, 0.0, RandomStream(1))
    with pytest.raises(AegisColdStartError):
        channel.observe(gains, jams, 2, channel.NOISY_DELAYED, 0.0, RandomStream(1))


def test_observe_never_reads_the_current_slot():
    gains, jams = history(3)
    with pytest.raises(AegisColdStartError):
        channel.observe(gains, jams, 5, channel.IDEAL, 0.0, RandomStream(1))


def test_noisy_observation_is_clamped_and_centered():
    gains = [ChannelGains(0.5, 0.5, 0.5, 0.5, 0.5)] * 2
    jams = [40.0, 40.0]
    stream = RandomStream(9)
    values = []
    for _ in range(100000):
        obs = channel.observe(gains, jams, 3, channel.NOISY_DELAYED, 1.5, stream,
                              max_gain=1.0, max_jam_power=80.0)
        assert 0 < min(obs.est_gains) and max(obs.est_gains) <= 1.0
        assert 0.0 <= obs.est_jam_power <= 80.0
        values.append(obs.est_gains[0])
    assert 0.45 <= numpy.mean(values) <= 0.55


def test_neutral_observation():
    obs = channel.neutral_observation(2.0, 80.0)
    assert obs.est_gains == (1.0,) * 5
    assert obs.est_jam_power == 40.0
