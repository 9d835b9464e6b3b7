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
Jammer behaviors. A jammer acts on what it saw in slot k-1: the user-message
BER rho1 measured at BS0 and whether the UAV relayed.
"""

from aegis import tabular
from aegis.agents import ActionGrid


class Jammer(object):
    kind = None

    def __init__(self, grid, config):
        self.grid = grid
        self.config = config
        self.last_epsilon = 0.0

    def act(self, k, rho1_prev, uav_relayed_prev, stream):
        raise NotImplementedError

    def learn(self, k, reward, rho1_next):
        """ Only learning jammers change state. """
        pass


class StaticJammer(Jammer):
    kind = 'static'

    def __init__(self, grid, config):
        Jammer.__init__(self, grid, config)
        self.index = grid.index_of(config.level)

    def act(self, k, rho1_prev, uav_relayed_prev, stream):
        return self.index


class ReactiveJammer(Jammer):
    """ Jams at the configured level only after a slot in which the UAV relayed. """
    kind = 'reactive'

    def __init__(self, grid, config):
        Jammer.__init__(self, grid, config)
        self.index = grid.index_of(config.level)

    def act(self, k, rho1_prev, uav_relayed_prev, stream):
        return self.index if uav_relayed_prev else 0


class SmartJammer(Jammer):
    """
    Q-learning jammer keyed by the binned BER of the previous slot, rewarded
    with its own utility u_J = -u_uav - y C_J.
    """
    kind = 'smart'

    def __init__(self, grid, config, slots, table=None):
        Jammer.__init__(self, grid, config)
        self.discretizer = tabular.Discretizer([0.0], [0.5], [config.rho_bins])
        self.table = table if table is not None else tabular.QTable(len(grid))
        self.horizon = tabular.decay_horizon(config.epsilon_decay_slots, slots)
        self._pending = None

    def epsilon(self, k):
        return tabular.linear_epsilon(k, self.config.epsilon_start, self.config.epsilon_end,
                                      self.horizon)

    def state_key(self, rho1):
        return self.discretizer.key([rho1])

    def act(self, k, rho1_prev, uav_relayed_prev, stream):
        key = self.state_key(rho1_prev)
        self.last_epsilon = self.epsilon(k)
        index = tabular.epsilon_greedy(self.table.values(key), self.last_epsilon, stream)
        self._pending = (key, index)
        return index

    def learn(self, k, reward, rho1_next):
        key, index = self._pending
        alpha = tabular.visit_step(self.table, key, index, self.config.alpha)
        tabular.q_update(self.table, key, index, reward, self.state_key(rho1_next), alpha,
                         self.config.gamma)
        self._pending = None

    def greedy_action(self, rho1):
        return self.table.greedy(self.state_key(rho1))


def make_jammer(config, slots=None):
    j = config.jammer
    slots = config.run.slots if slots is None else slots
    grid = ActionGrid.uniform(config.radio.max_jam_power, config.radio.jam_power_step)
    if j.kind == 'static':
        return StaticJammer(grid, j)
    if j.kind == 'reactive':
        return ReactiveJammer(grid, j)
    return SmartJammer(grid, j, slots)
