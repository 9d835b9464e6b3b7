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

import numpy
import pytest
import scipy.stats

from aegis import agents, nn, tabular
from aegis.agents import ActionGrid, DrlurAgent, Experience, HpurAgent, QLearningAgent, \
    ReplayPool, UavState
from aegis.numerics import RandomStream
from aegis.scenario import UavConfig, default_config
from aegis.utils import AegisStructuralError

uav_grid = ActionGrid.uniform(150.0, 5.0)
frozen = UavState((0.1, 0.1, 0.1), (0.5,) * 5, 0.5)


def unflatten(matrix, m):
    """ States and actions back out of a sequence matrix holding m states. """
    flat = numpy.asarray(matrix).ravel()
    states, actions, offset = [], [], 0
    for i in range(m):
        states.append(flat[offset:offset + 9])
        offset += 9
        if i < m - 1:
            actions.append(flat[offset])
            offset += 1
    return states, actions, flat[offset:]


def test_grids():
    assert len(uav_grid) == 31
    assert uav_grid.max_power == 150.0
    assert uav_grid.power(30) == 150.0
    assert uav_grid.index_of(35.0) == 7
    assert uav_grid.normalize(75.0) == 0.5
    jam_grid = ActionGrid.uniform(80.0, 5.0)
    assert len(jam_grid) == 17
    assert jam_grid.levels[0] == 0.0
    with pytest.raises(AegisStructuralError):
        uav_grid.index_of(12.5)
    with pytest.raises(AegisStructuralError):
        ActionGrid((5.0, 10.0))


def test_neutral_state():
    state = agents.neutral_state()
    vector = state.as_vector()
    assert vector.shape == (agents.STATE_SIZE,)
    assert state.rho == agents.NEUTRAL_RHO
    assert numpy.all((vector >= 0) & (vector <= 1))


def build(states, actions, E=13):
    return agents.build_sequence_matrix(states, actions, E)


def test_empty_sequence_is_zero():
    assert not build([], []).any()
    zeros = [numpy.zeros(9)] * 13
    assert not build(zeros, [0.0] * 12).any()


def test_cold_start_sequence_layout():
    matrix = build([numpy.full(9, 0.5)], [])
    flat = matrix.ravel()
    assert matrix.shape == (12, 12)
    assert numpy.all(flat[:9] == 0.5)
    assert not flat[9:].any()


def test_full_sequence_round_trip():
    stream = RandomStream(4)
    states = [stream.normal(9) for _ in range(20)]
    actions = [stream.random() for _ in range(19)]
    matrix = build(states, actions)
    got_states, got_actions, padding = unflatten(matrix, 13)
    for got, want in zip(got_states, states[-13:]):
        assert numpy.array_equal(got, want)
    assert got_actions == actions[-12:]
    assert len(padding) == 15 and not padding.any()


def test_history_too_long_for_the_input():
    with pytest.raises(AegisStructuralError):
        build([numpy.zeros(9)] * 15, [0.0] * 14, E=15)


def test_replay_pool_is_fifo():
    pool = ReplayPool(3)
    for i in range(4):
        pool.add(Experience(None, i, float(i), None))
    assert len(pool) == 3
    assert [pool[i].action for i in range(3)] == [1, 2, 3]


def test_replay_sampling_is_reproducible():
    pool = ReplayPool(10)
    for i in range(10):
        pool.add(Experience(None, i, 0.0, None))
    a = [e.action for e in pool.sample(16, RandomStream(7))]
    b = [e.action for e in pool.sample(16, RandomStream(7))]
    assert a == b
    with pytest.raises(AegisStructuralError):
        ReplayPool(2).sample(1, RandomStream(1))


def drlur(seed=1, **overrides):
    config = UavConfig(**overrides)
    stream = RandomStream(seed)
    return DrlurAgent(uav_grid, config, 2000, stream.split('init')), stream.split('uav')


def test_drlur_explores_uniformly_before_history_fills():
    agent, stream = drlur()
    counts = numpy.zeros(31)
    for _ in range(800):
        agent.begin_episode()
        for k in range(1, 14):
            counts[agent.act(k, frozen, stream)] += 1
            assert agent.last_epsilon == 1.0
    assert scipy.stats.chisquare(counts).pvalue > 0.01


def test_fresh_drlur_values_every_action_alike():
    agent, stream = drlur()
    seq = build([frozen] * 13, [0.5] * 12)
    assert not agent.q_values(seq).any()
    scaled, _ = drlur(head_init_scale=1.0)
    assert numpy.ptp(scaled.q_values(seq)) > 0
    assert UavConfig().learning_rate == 0.01


def test_drlur_greedy_follows_the_network():
    agent, stream = drlur(epsilon_start=0.0, epsilon_end=0.0)
    weights = nn.CnnWeights.zeros(agent.arch)
    weights.fc2_b[30] = 1.0
    agent.weights = weights
    for k in range(1, 14):
        agent.act(k, frozen, stream)
    for k in range(14, 20):
        assert uav_grid.power(agent.act(k, frozen, stream)) == 150.0


def test_drlur_is_deterministic():
    runs = []
    for _ in range(2):
        agent, stream = drlur(seed=9)
        actions = []
        for k in range(1, 25):
            actions.append(agent.act(k, frozen, stream))
            agent.learn(k, -0.1 * actions[-1], frozen, stream)
        runs.append(actions)
    assert runs[0] == runs[1]


def test_drlur_single_sample_loss():
    agent, stream = drlur(batch_size=1, gamma=0.0)
    index = agent.act(1, frozen, stream)
    seq = agent._pending[0]
    q = agent.q_values(seq)[index]
    loss = agent.learn(1, -0.2, frozen, stream)
    assert loss == pytest.approx((q + 0.2) ** 2, rel=1e-12)
    assert len(agent.pool) == 1


def test_drlur_regresses_to_a_constant_reward():
    agent, stream = drlur(learning_rate=1e-4, gamma=0.0)
    losses = []
    for k in range(1, 114):
        agent.act(k, frozen, stream)
        loss = agent.learn(k, -0.2, frozen, stream)
        if k > 13:
            losses.append(loss)
    assert len(losses) == 100
    assert numpy.mean(losses[-10:]) < numpy.mean(losses[:10])


def bandit_converges(cls, seed, slots=2000):
    config = UavConfig(agent=cls.kind)
    agent = cls(uav_grid, config, slots)
    stream = RandomStream(seed).split('uav')
    for k in range(1, slots + 1):
        index = agent.act(k, frozen, stream)
        agent.learn(k, -0.01 * abs(index - 7), frozen, stream)
    return agent.greedy_action(frozen) == 7


@pytest.mark.parametrize('cls', [QLearningAgent, HpurAgent])
def test_benchmark_agents_solve_a_bandit(cls):
    converged = sum(bandit_converges(cls, seed) for seed in range(1, 21))
    assert converged >= 19


def test_tabular_agents_average_their_rewards():
    agent = QLearningAgent(uav_grid, UavConfig(alpha=0.01, gamma=0.0), 100)
    stream = RandomStream(3)
    for k, utility in enumerate((-0.3, -0.1, -0.2), start=1):
        agent._pending = (agent.state_key(frozen), 4)
        agent.learn(k, utility, frozen, stream)
    assert agent.table.get(agent.state_key(frozen), 4) == pytest.approx(-0.2)


def test_qlearning_ties_break_low():
    agent = QLearningAgent(uav_grid, UavConfig(epsilon_start=0.0, epsilon_end=0.0), 100)
    assert agent.act(1, frozen, RandomStream(1)) == 0


def test_hpur_point_mass_policy():
    policy = tabular.MixedPolicy(31)
    agent = HpurAgent(uav_grid, UavConfig(), 100, policy=policy)
    policy.set(agent.state_key(frozen), numpy.eye(31)[4])
    stream = RandomStream(2)
    assert {agent.act(k, frozen, stream) for k in range(1, 50)} == {4}
    assert agent.last_epsilon == 0.0


def test_fixed_agent():
    config = default_config().with_values(uav__agent='fixed', uav__fixed_power=35.0).validate()
    agent = agents.make_agent(config, RandomStream(1))
    assert isinstance(agent, agents.FixedAgent)
    assert {agent.act(k, frozen, None) for k in range(1, 10)} == {7}
    with pytest.raises(AegisStructuralError):
        agents.FixedAgent(uav_grid, UavConfig(), 10, power=12.5)


def test_make_agent_kinds_and_hotboot_exploration():
    config = default_config()
    fresh = agents.make_agent(config, RandomStream(1))
    assert isinstance(fresh, DrlurAgent)
    assert fresh.start_epsilon == 0.9 and not fresh.hotbooted
    warm = agents.make_agent(config, RandomStream(1), artifact=fresh.weights.copy())
    assert warm.hotbooted and warm.start_epsilon == 0.3
    assert warm.epsilon(1) == 0.3
    hpur = agents.make_agent(config.with_values(uav__agent='hpur'), RandomStream(1),
                             artifact=(tabular.QTable(31), tabular.MixedPolicy(31)))
    assert isinstance(hpur, HpurAgent) and hpur.hotbooted
    qlearn = agents.make_agent(config.with_values(uav__agent='qlearn'), RandomStream(1))
    assert isinstance(qlearn, QLearningAgent) and qlearn.policy is None


def test_exploration_schedule():
    agent = QLearningAgent(uav_grid, UavConfig(), 2000)
    assert agent.epsilon(1) == 0.9
    assert agent.epsilon(1001) == pytest.approx(0.01)
    assert agent.epsilon(1900) == pytest.approx(0.01)
    short = QLearningAgent(uav_grid, UavConfig(), 100)
    assert short.horizon == 50


def test_frozen_target_follows_every_period():
    agent, stream = drlur(target_period=2)
    initial = agent.target.fc2_w.copy()
    for k in range(1, 4):
        agent.act(k, frozen, stream)
        agent.learn(k, -0.2, frozen, stream)
        if k == 1:
            assert numpy.array_equal(agent.target.fc2_w, initial)
        if k == 2:
            assert numpy.array_equal(agent.target.fc2_w, agent.weights.fc2_w)
    assert not numpy.array_equal(agent.target.fc2_w, agent.weights.fc2_w)
