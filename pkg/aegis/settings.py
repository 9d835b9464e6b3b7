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

import os


class path():
    this_dir = os.path.dirname(os.path.abspath(__file__))
    this_repo_dir = os.path.abspath(os.path.join(this_dir, '..'))
    scenarios_dir = os.path.join(this_repo_dir, 'scenarios')


class env():
    threads_var = 'AEGIS_THREADS'


class exit_codes():
    ok = 0
    selftest_failed = 1
    config = 2
    io = 3
    numeric = 4


class radio():
    user_power = 50.0         # mW
    noise_power = 1.0         # mW
    relay_cost = 0.0001       # utility per mW
    jam_cost = 0.001          # utility per mW
    max_uav_power = 150.0     # mW
    max_jam_power = 80.0      # mW
    uav_power_step = 5.0      # mW
    jam_power_step = 5.0      # mW
    slot_duration = 0.001     # s
    max_user_power = 200.0    # mW


class channel():
    mode = 'abstract'
    links = ('h1', 'h2', 'h3', 'h4', 'h5')
    # abstract mode: median gain in dB and shadowing per link
    mean_db = dict(h1=-20.0, h2=-6.9897, h3=-13.0103, h4=-10.0, h5=-21.4267)
    sigma_db = dict(h1=1.0, h2=1.0, h3=1.0, h4=1.0, h5=1.0)
    max_gain = 1.0
    # geometry mode
    cell_radius = 200.0
    user_x, user_y = 100.0, 0.0
    bs0_x, bs0_y = 0.0, 0.0
    bs1_x, bs1_y = 600.0, 0.0
    jammer_x, jammer_y = 40.0, 30.0
    uav_x, uav_y, uav_z = 300.0, 0.0, 100.0
    speed_min, speed_max = 1.0, 10.0
    mean_db_at_ref = -30.0
    ref_dist = 1.0
    ground_pathloss_exp = 3.0
    ground_shadow_db = 6.0
    uav_pathloss_exp = 2.05
    uav_shadow_db = 3.0
    min_distance = 1.0


class uav():
    agent = 'drlur'
    agents = ('drlur', 'hpur', 'qlearn', 'fixed')
    fixed_power = 0.0
    case = 1
    noise_sigma = 1.5
    learning_rate = 0.01
    batch_size = 16
    gamma = 0.95
    history = 13
    pool_capacity = 10000
    epsilon_start = 0.9
    epsilon_end = 0.01
    epsilon_decay_slots = 1000
    hotboot_epsilon_start = 0.3
    target_period = 0
    head_init_scale = 0.0
    alpha = 0.1
    delta = 0.01
    rho_bins = 5


class jammer():
    kind = 'smart'
    kinds = ('static', 'reactive', 'smart')
    level = 80.0
    alpha = 0.1
    gamma = 0.95
    epsilon_start = 0.9
    epsilon_end = 0.01
    epsilon_decay_slots = 1000
    rho_bins = 10


class run():
    slots = 2000
    seed = 1
    window = 50
    eta = 0.1
    hotboot_scenarios = 10
    hotboot_slots = 500
    hotboot_jitter_db = 3.0
    hotboot_jitter_pos = 0.1


class nn():
    n1, n2, n3 = 12, 6, 5
    f1, f2 = 20, 40
    r1, r2 = 1000, 31
    weights_magic = b'UAVQ'
    tables_magic = b'UAVT'
    format_version = 1
    weights_suffix = '.uavq'
    tables_suffix = '.uavt'


class selftest():
    erfc_points = 1000
    erfc_tolerance = 1e-10
    gradient_params = 200
    gradient_inputs = 5
    gradient_step = 1e-5
    gradient_tolerance = 1e-4
    qpsk_grid = (0.1, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0)
    qpsk_symbols = 1000000


def _links(attribute, values, description):
    return [('channel', '%s_%s' % (link, attribute), float, values[link], description % link)
            for link in channel.links]


# (section, key, type, default, description). type may be a tuple of allowed strings.
SCENARIO_SCHEMA = [
    ('radio', 'user_power', float, radio.user_power, 'user transmit power P (mW)'),
    ('radio', 'noise_power', float, radio.noise_power, 'receiver noise power sigma (mW)'),
    ('radio', 'relay_cost', float, radio.relay_cost, 'UAV relay cost C_U per mW'),
    ('radio', 'jam_cost', float, radio.jam_cost, 'jamming cost C_J per mW'),
    ('radio', 'max_uav_power', float, radio.max_uav_power, 'maximum relay power P_U^M (mW)'),
    ('radio', 'max_jam_power', float, radio.max_jam_power, 'maximum jamming power P_J^M (mW)'),
    ('radio', 'uav_power_step', float, radio.uav_power_step, 'UAV action grid step (mW)'),
    ('radio', 'jam_power_step', float, radio.jam_power_step, 'jammer action grid step (mW)'),
    ('radio', 'slot_duration', float, radio.slot_duration, 'slot duration tau (s)'),
    ('radio', 'max_user_power', float, radio.max_user_power, 'radio limit on P (mW)'),
    ('channel', 'mode', ('abstract', 'geometry'), channel.mode, 'channel model'),
    ('channel', 'max_gain', float, channel.max_gain, 'gain that normalizes to 1.0'),
    ('channel', 'cell_radius', float, channel.cell_radius, 'BS0 coverage radius (m)'),
    ('channel', 'user_x', float, channel.user_x, 'initial user x (m)'),
    ('channel', 'user_y', float, channel.user_y, 'initial user y (m)'),
    ('channel', 'bs0_x', float, channel.bs0_x, 'BS0 x (m)'),
    ('channel', 'bs0_y', float, channel.bs0_y, 'BS0 y (m)'),
    ('channel', 'bs1_x', float, channel.bs1_x, 'BS1 x (m)'),
    ('channel', 'bs1_y', float, channel.bs1_y, 'BS1 y (m)'),
    ('channel', 'jammer_x', float, channel.jammer_x, 'jammer x (m)'),
    ('channel', 'jammer_y', float, channel.jammer_y, 'jammer y (m)'),
    ('channel', 'uav_x', float, channel.uav_x, 'UAV x (m)'),
    ('channel', 'uav_y', float, channel.uav_y, 'UAV y (m)'),
    ('channel', 'uav_z', float, channel.uav_z, 'UAV altitude (m)'),
    ('channel', 'speed_min', float, channel.speed_min, 'random waypoint min speed (m/s)'),
    ('channel', 'speed_max', float, channel.speed_max, 'random waypoint max speed (m/s)'),
    ('channel', 'mean_db_at_ref', float, channel.mean_db_at_ref, 'gain at ref_dist (dB)'),
    ('channel', 'ref_dist', float, channel.ref_dist, 'path loss reference distance (m)'),
    ('channel', 'ground_pathloss_exp', float, channel.ground_pathloss_exp, 'h1, h3 exponent'),
    ('channel', 'ground_shadow_db', float, channel.ground_shadow_db, 'h1, h3 shadowing (dB)'),
    ('channel', 'uav_pathloss_exp', float, channel.uav_pathloss_exp, 'h2, h4, h5 exponent'),
    ('channel', 'uav_shadow_db', float, channel.uav_shadow_db, 'h2, h4, h5 shadowing (dB)'),
] + _links('mean_db', channel.mean_db, 'abstract mode median gain of %s (dB)') \
  + _links('sigma_db', channel.sigma_db, 'abstract mode shadowing of %s (dB)') + [
    ('uav', 'agent', uav.agents, uav.agent, 'UAV relay agent'),
    ('uav', 'fixed_power', float, uav.fixed_power, 'relay power of the fixed agent (mW)'),
    ('uav', 'case', (1, 2), uav.case, '1 = ideal observation, 2 = delayed and noisy'),
    ('uav', 'noise_sigma', float, uav.noise_sigma, 'case 2 error std on normalized features'),
    ('uav', 'learning_rate', float, uav.learning_rate, 'CNN SGD learning rate'),
    ('uav', 'batch_size', int, uav.batch_size, 'replay minibatch size M'),
    ('uav', 'gamma', float, uav.gamma, 'discount factor'),
    ('uav', 'history', int, uav.history, 'states per experience sequence E'),
    ('uav', 'pool_capacity', int, uav.pool_capacity, 'replay pool capacity'),
    ('uav', 'epsilon_start', float, uav.epsilon_start, 'initial exploration rate'),
    ('uav', 'epsilon_end', float, uav.epsilon_end, 'final exploration rate'),
    ('uav', 'epsilon_decay_slots', int, uav.epsilon_decay_slots, 'slots of linear decay'),
    ('uav', 'hotboot_epsilon_start', float, uav.hotboot_epsilon_start,
     'initial exploration rate of a hotbooted agent'),
    ('uav', 'target_period', int, uav.target_period, 'frozen target copy period (0 = off)'),
    ('uav', 'head_init_scale', float, uav.head_init_scale,
     'scale of the CNN output layer init (0 = all Q-values start at 0)'),
    ('uav', 'alpha', float, uav.alpha, 'tabular learning rate (floor of the 1/n visit step)'),
    ('uav', 'delta', float, uav.delta, 'PHC step'),
    ('uav', 'rho_bins', int, uav.rho_bins, 'bins per BER feature of tabular agents'),
    ('jammer', 'kind', jammer.kinds, jammer.kind, 'jammer behavior'),
    ('jammer', 'level', float, jammer.level, 'static / reactive jamming power (mW)'),
    ('jammer', 'alpha', float, jammer.alpha,
     'smart jammer learning rate (floor of the 1/n visit step)'),
    ('jammer', 'gamma', float, jammer.gamma, 'smart jammer discount factor'),
    ('jammer', 'epsilon_start', float, jammer.epsilon_start, 'initial exploration rate'),
    ('jammer', 'epsilon_end', float, jammer.epsilon_end, 'final exploration rate'),
    ('jammer', 'epsilon_decay_slots', int, jammer.epsilon_decay_slots, 'slots of linear decay'),
    ('jammer', 'rho_bins', int, jammer.rho_bins, 'bins of the observed user BER'),
    ('run', 'slots', int, run.slots, 'slots per episode'),
    ('run', 'seed', int, run.seed, 'master seed'),
    ('run', 'window', int, run.window, 'moving-average window W'),
    ('run', 'eta', float, run.eta, 'convergence band around the NE utility'),
    ('run', 'hotboot_scenarios', int, run.hotboot_scenarios, 'hotboot episodes Gamma'),
    ('run', 'hotboot_slots', int, run.hotboot_slots, 'slots per hotboot episode K'),
    ('run', 'hotboot_jitter_db', float, run.hotboot_jitter_db, 'channel mean jitter (dB)'),
    ('run', 'hotboot_jitter_pos', float, run.hotboot_jitter_pos, 'node position jitter (fraction)'),
]
