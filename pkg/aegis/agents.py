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
UAV relay agents: the deep-RL agent (DRLUR) and its benchmarks, hotbooted
policy hill climbing (HPUR), plain Q-learning and a fixed-power relay.

Every agent exposes the same slot protocol used by the game loop:

    index = agent.act(k, state, stream)        # choose x(k) from s(k)
    agent.learn(k, utility, next_state, stream)  # reward u(k), then s(k+1)

States carry only information whose origin slot is k-1 or earlier.
"""

import logging
from collections import deque
from dataclasses import dataclass

import numpy

import aegis.settings as S
from aegis import channel, nn, tabular
from aegis.utils import AegisNumericError, AegisStructuralError, digest_arrays, require

logger = logging.getLogger(__name__)

STATE_SIZE = 9
NEUTRAL_RHO = (0.25, 0.25, 0.25)


@dataclass(frozen=True)
class ActionGrid:
    levels: tuple

    @classmethod
    def uniform(cls, max_power, step):
        n = int(round(max_power / step)) + 1
        return cls(tuple(float(i * step) for i in range(n)))

    def __post_init__(self):
        require(len(self.levels) >= 1 and self.levels[0] == 0.0,
                'An action grid must start at 0 mW.', AegisStructuralError)
        require(all(b > a for a, b in zip(self.levels, self.levels[1:])),
                'Action grid levels must be strictly increasing.', AegisStructuralError)

    def __len__(self):
        return len(self.levels)

    @property
    def max_power(self):
        return self.levels[-1]

    def power(self, index):
        return self.levels[index]

    def index_of(self, power):
        for i, level in enumerate(self.levels):
            if abs(level - power) <= 1e-9 * max(1.0, self.max_power):
                return i
        raise AegisStructuralError('%r mW is not on the action grid.' % power)

    def normalize(self, power):
        return power / self.max_power if self.max_power > 0 else 0.0


@dataclass(frozen=True)
class UavState:
    rho: tuple
    gains: tuple
    jam: float

    def as_vector(self):
        return numpy.concatenate([self.rho, self.gains, [self.jam]])


def make_state(rho_prev, observation, max_gain, max_jam_power):
    """ s(k) = [rho(k-1), normalized h estimate, normalized y estimate] """
    gains, jam = channel.normalize_observation(observation.est_gains, observation.est_jam_power,
                                               max_gain, max_jam_power)
    return UavState(tuple(float(r) for r in rho_prev), tuple(float(g) for g in gains),
                    float(jam))


def neutral_state(max_gain=1.0, max_jam_power=S.radio.max_jam_power):
    return make_state(NEUTRAL_RHO, channel.neutral_observation(max_gain, max_jam_power),
                      max_gain, max_jam_power)


def _vector(state):
    if isinstance(state, UavState):
        return state.as_vector()
    return numpy.asarray(state, dtype=float)


def build_sequence_matrix(state_history, action_history, E, n1=S.nn.n1):
    """
    The last E states interleaved with the E-1 normalized actions taken between
    them, (s, a, s, a, ..., s) oldest first, zero-padded and reshaped row-major
    to n1 x n1. Shorter histories are laid out from cell 0 and zero-filled.
    """
    size = STATE_SIZE * E + (E - 1)
    if size > n1 * n1:
        raise AegisStructuralError('%d states do not fit a %dx%d matrix.' % (E, n1, n1))
    states = list(state_history)[-E:]
    m = len(states)
    actions = list(action_history)[-(m - 1):] if m > 1 else []
    actions = [0.0] * (m - 1 - len(actions)) + actions
    flat = numpy.zeros(n1 * n1)
    offset = 0
    for i, state in enumerate(states):
        flat[offset:offset + STATE_SIZE] = _vector(state)
        offset += STATE_SIZE
        if i < m - 1:
            flat[offset] = actions[i]
            offset += 1
    return flat.reshape(n1, n1)


@dataclass
class Experience:
    seq: numpy.ndarray
    action: int
    utility: float
    next_seq: numpy.ndarray


class ReplayPool(object):
    def __init__(self, capacity=S.uav.pool_capacity):
        require(capacity >= 1, 'Replay pool capacity must be >= 1.', AegisStructuralError)
        self.capacity = capacity
        self.memory = deque(maxlen=capacity)

    def add(self, experience):
        self.memory.append(experience)

    def sample(self, m, stream):
        """ m experiences drawn uniformly with replacement. """
        if not self.memory:
            raise AegisStructuralError('Cannot sample from an empty replay pool.')
        return [self.memory[i] for i in stream.integers(len(self.memory), size=m)]

    def __len__(self):
        return len(self.memory)

    def __getitem__(self, i):
        return self.memory[i]


class RelayAgent(object):
    """ Common bookkeeping: the action grid and the exploration schedule. """
    kind = None

    def __init__(self, grid, config, slots, hotbooted=False):
        self.grid = grid
        self.config = config
        self.hotbooted = hotbooted
        self.start_epsilon = config.hotboot_epsilon_start if hotbooted else config.epsilon_start
        self.horizon = tabular.decay_horizon(config.epsilon_decay_slots, slots)
        self.last_epsilon = self.start_epsilon

    def begin_episode(self):
        """ Slot numbering restarts; learned parameters carry over. """
        pass

    def epsilon(self, k):
        return tabular.linear_epsilon(k, self.start_epsilon, self.config.epsilon_end,
                                      self.horizon)

    def act(self, k, state, stream):
        raise NotImplementedError

    def learn(self, k, utility, next_state, stream):
        raise NotImplementedError

    def artifact_digest(self):
        return ''


class DrlurAgent(RelayAgent):
    """
    Deep-RL relay: a CNN maps the sequence of the last E states and actions to
    one Q-value per relay power. Trained online from a replay pool, one SGD step
    per slot on M sampled experiences.
    """
    kind = 'drlur'

    def __init__(self, grid, config, slots, stream, arch=None, weights=None, hotbooted=False):
        RelayAgent.__init__(self, grid, config, slots, hotbooted)
        self.arch = (arch or nn.CnnArchitecture()).validate()
        require(len(grid) == self.arch.r2, 'The UAV grid must have one level per CNN output.',
                AegisStructuralError)
        self.train = nn.TrainConfig(config.learning_rate, config.batch_size,
                                    config.gamma).validate()
        if weights is None:
            weights = nn.init_weights(self.arch, stream)
            # with scale 0 every action starts at Q = 0
            weights.fc2_w *= config.head_init_scale
        self.weights = weights.validate(self.arch)
        self.target = self.weights.copy() if config.target_period > 0 else None
        self.pool = ReplayPool(config.pool_capacity)
        self.E = config.history
        self.states = deque(maxlen=self.E)
        self.actions = deque(maxlen=self.E)
        self.steps = 0
        self.last_loss = None
        self._pending = None

    def begin_episode(self):
        self.states.clear()
        self.actions.clear()
        self._pending = None

    def q_values(self, seq):
        return nn.forward(self.arch, self.weights, seq)

    def act(self, k, state, stream):
        self.states.append(state)
        seq = build_sequence_matrix(self.states, self.actions, self.E, self.arch.n1)
        if k <= self.E:
            self.last_epsilon = 1.0
            index = stream.integer(len(self.grid))
        else:
            self.last_epsilon = self.epsilon(k)
            index = tabular.epsilon_greedy(self.q_values(seq), self.last_epsilon, stream)
        self.actions.append(self.grid.normalize(self.grid.power(index)))
        self._pending = (seq, index)
        return index

    def learn(self, k, utility, next_state, stream):
        seq, index = self._pending
        next_seq = build_sequence_matrix(list(self.states) + [next_state], self.actions, self.E,
                                         self.arch.n1)
        self.pool.add(Experience(seq, index, float(utility), next_seq))
        batch = self.pool.sample(self.train.batch_size, stream)
        bootstrap = self.target if self.target is not None else self.weights
        next_q = nn.forward(self.arch, bootstrap, numpy.stack([e.next_seq for e in batch]))
        targets = [e.utility + self.train.gamma * float(numpy.max(q))
                   for e, q in zip(batch, next_q)]
        loss, grads = nn.loss_and_gradients(
            self.arch, self.weights, [(e.seq, e.action, t) for e, t in zip(batch, targets)])
        if not numpy.isfinite(loss):
            raise AegisNumericError('CNN loss', loss, k)
        self.weights = nn.sgd_step(self.weights, grads, self.train.learning_rate)
        self.steps += 1
        self.last_loss = loss
        if self.target is not None and self.steps % self.config.target_period == 0:
            self.target = self.weights.copy()
        self._pending = None
        return loss

    def artifact_digest(self):
        return digest_arrays(self.weights.arrays())


def rho_discretizer(bins):
    return tabular.Discretizer([0.0] * 3, [0.5] * 3, [bins] * 3)


class TabularRelayAgent(RelayAgent):
    def __init__(self, grid, config, slots, table=None, policy=None, hotbooted=False):
        RelayAgent.__init__(self, grid, config, slots, hotbooted)
        self.discretizer = rho_discretizer(config.rho_bins)
        self.table = table if table is not None else tabular.QTable(len(grid))
        self.policy = policy
        self._pending = None

    def state_key(self, state):
        return self.discretizer.key(state.rho)

    def learn(self, k, utility, next_state, stream):
        key, index = self._pending
        alpha = tabular.visit_step(self.table, key, index, self.config.alpha)
        tabular.q_update(self.table, key, index, utility, self.state_key(next_state), alpha,
                         self.config.gamma)
        if self.policy is not None:
            tabular.phc_update(self.policy, self.table, key, self.config.delta)
        self._pending = None

    def artifact_digest(self):
        keys = sorted(self.table.entries)
        return digest_arrays([numpy.asarray(keys, dtype=float)] +
                             [self.table.entries[s] for s in keys])


class HpurAgent(TabularRelayAgent):
    """ Policy hill climbing: samples from a mixed policy nudged toward the greedy action. """
    kind = 'hpur'

    def __init__(self, grid, config, slots, table=None, policy=None, hotbooted=False):
        policy = policy if policy is not None else tabular.MixedPolicy(len(grid))
        TabularRelayAgent.__init__(self, grid, config, slots, table, policy, hotbooted)

    def act(self, k, state, stream):
        key = self.state_key(state)
        # exploration lives in the mixed policy itself
        self.last_epsilon = 0.0
        index = self.policy.sample(key, stream)
        self._pending = (key, index)
        return index

    def greedy_action(self, state):
        return int(numpy.argmax(self.policy.probabilities(self.state_key(state))))


class QLearningAgent(TabularRelayAgent):
    kind = 'qlearn'

    def act(self, k, state, stream):
        key = self.state_key(state)
        self.last_epsilon = self.epsilon(k)
        index = tabular.epsilon_greedy(self.table.values(key), self.last_epsilon, stream)
        self._pending = (key, index)
        return index

    def greedy_action(self, state):
        return self.table.greedy(self.state_key(state))


class FixedAgent(RelayAgent):
    """ Always relays at one configured power; 0 mW never relays. """
    kind = 'fixed'

    def __init__(self, grid, config, slots, power=None):
        RelayAgent.__init__(self, grid, config, slots)
        self.index = grid.index_of(config.fixed_power if power is None else power)

    def act(self, k, state, stream):
        self.last_epsilon = 0.0
        return self.index

    def learn(self, k, utility, next_state, stream):
        pass


def make_agent(config, stream, slots=None, artifact=None):
    """
    Builds the UAV agent a scenario asks for. `artifact` holds hotboot output:
    CnnWeights for DRLUR, a (QTable, MixedPolicy or None) pair for tabular agents.
    """
    u = config.uav
    slots = config.run.slots if slots is None else slots
    grid = ActionGrid.uniform(config.radio.max_uav_power, config.radio.uav_power_step)
    hotbooted = artifact is not None
    if u.agent == 'drlur':
        return DrlurAgent(grid, u, slots, stream, weights=artifact, hotbooted=hotbooted)
    if u.agent in ('hpur', 'qlearn'):
        table, policy = artifact if artifact is not None else (None, None)
        if u.agent == 'hpur':
            return HpurAgent(grid, u, slots, table, policy, hotbooted)
        return QLearningAgent(grid, u, slots, table, None, hotbooted)
    return FixedAgent(grid, u, slots)
