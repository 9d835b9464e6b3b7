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
Tabular Q-learning and policy hill climbing, shared by the smart jammer and
the benchmark relay agents. Ties always resolve to the lowest action index.
"""

import struct

import numpy

import aegis.settings as S
from aegis import data_utils
from aegis.utils import AegisFormatError, AegisIOError, AegisStructuralError, require

TABLE_HEADER = struct.Struct('<4sHHHIB')


class Discretizer(object):
    """ Uniform bins per feature; values outside a feature's range land in its edge bins. """
    def __init__(self, lows, highs, bins):
        require(len(lows) == len(highs) == len(bins),
                'Discretizer needs one range and bin count per feature.', AegisStructuralError)
        require(all(b >= 1 for b in bins), 'Every feature needs at least one bin.')
        require(all(h > l for l, h in zip(lows, highs)), 'Feature ranges must be non-empty.')
        self.lows = numpy.asarray(lows, dtype=float)
        self.highs = numpy.asarray(highs, dtype=float)
        self.bins = numpy.asarray(bins, dtype=int)

    def key(self, values):
        values = numpy.asarray(values, dtype=float)
        if values.shape != self.lows.shape:
            raise AegisStructuralError('Expected %d features, got %d.'
                                       % (len(self.lows), values.size))
        scaled = (values - self.lows) / (self.highs - self.lows) * self.bins
        index = numpy.clip(numpy.floor(scaled).astype(int), 0, self.bins - 1)
        return tuple(int(i) for i in index)

    def n_states(self):
        return int(numpy.prod(self.bins))


class QTable(object):
    def __init__(self, n_actions):
        require(n_actions >= 1, 'A Q-table needs at least one action.', AegisStructuralError)
        self.n_actions = n_actions
        self.entries = {}
        self.counts = {}

    def values(self, state):
        """ Q-values of a state; unseen states read as zeros. """
        if state in self.entries:
            return self.entries[state]
        return numpy.zeros(self.n_actions)

    def get(self, state, action):
        return float(self.values(state)[action])

    def set(self, state, action, value):
        if state not in self.entries:
            self.entries[state] = numpy.zeros(self.n_actions)
        self.entries[state][action] = value

    def greedy(self, state):
        return int(numpy.argmax(self.values(state)))

    def visit(self, state, action):
        """
        Counts one more update of (state, action) and returns the total.
        States that hold values but no counts, as loaded from a hotboot
        artifact, count as visited infinitely often.
        """
        if state not in self.counts:
            start = numpy.inf if state in self.entries else 0.0
            self.counts[state] = numpy.full(self.n_actions, start)
        self.counts[state][action] += 1
        return float(self.counts[state][action])

    def copy(self):
        other = QTable(self.n_actions)
        other.entries = {s: v.copy() for s, v in self.entries.items()}
        other.counts = {s: c.copy() for s, c in self.counts.items()}
        return other

    def __len__(self):
        return len(self.entries)


class MixedPolicy(object):
    def __init__(self, n_actions):
        require(n_actions >= 1, 'A policy needs at least one action.', AegisStructuralError)
        self.n_actions = n_actions
        self.entries = {}

    def probabilities(self, state):
        """ Unseen states play uniformly. """
        if state in self.entries:
            return self.entries[state]
        return numpy.full(self.n_actions, 1.0 / self.n_actions)

    def set(self, state, probabilities):
        self.entries[state] = numpy.asarray(probabilities, dtype=float)

    def sample(self, state, stream):
        return stream.choice(self.probabilities(state))

    def copy(self):
        other = MixedPolicy(self.n_actions)
        other.entries = {s: p.copy() for s, p in self.entries.items()}
        return other

    def __len__(self):
        return len(self.entries)


def q_update(table, s, a, reward, s_next, alpha, gamma):
    """ Q(s,a) <- (1 - alpha) Q(s,a) + alpha (reward + gamma max_b Q(s_next, b)) """
    target = reward + gamma * float(numpy.max(table.values(s_next)))
    table.set(s, a, (1.0 - alpha) * table.get(s, a) + alpha * target)
    return table


def visit_step(table, s, a, alpha):
    """
    Step size for the next update of (s, a): 1/n on the n-th visit, which keeps
    a running mean, but never below alpha.
    """
    return max(alpha, 1.0 / table.visit(s, a))


def epsilon_greedy(values, epsilon, stream):
    values = numpy.asarray(values, dtype=float)
    if values.size == 0:
        raise AegisStructuralError('epsilon-greedy needs at least one action value.')
    if stream.random() < epsilon:
        return stream.integer(values.size)
    return int(numpy.argmax(values))


def phc_update(policy, table, s, delta):
    """
    Moves probability mass toward the greedy action of s: +delta on the greedy
    action (capped at 1), -delta/(A-1) on each other action (floored at 0), then
    renormalizes onto the simplex.
    """
    n = policy.n_actions
    probs = policy.probabilities(s).copy()
    best = table.greedy(s)
    if n > 1:
        step = delta / (n - 1)
        for a in range(n):
            if a == best:
                probs[a] = min(probs[a] + delta, 1.0)
            else:
                probs[a] = max(probs[a] - step, 0.0)
    else:
        probs[0] = 1.0
    policy.set(s, probs / probs.sum())
    return policy


def linear_epsilon(k, start, end, decay_slots):
    """ Exploration rate in force at slot k (1-based): linear from start to end, then flat. """
    if decay_slots <= 0:
        return end
    frac = min(max(k - 1, 0) / float(decay_slots), 1.0)
    return start + (end - start) * frac


def decay_horizon(decay_slots, slots):
    return min(decay_slots, slots // 2)


def tables_bytes(table, policy=None):
    """
    Layout: magic 'UAVT', u16 version, u16 action count, u16 key length,
    u32 state count, u8 policy flag, then per state (sorted by key) the key as
    u16 values, A float64 Q-values and, when flagged, A float64 probabilities.
    """
    states = sorted(set(table.entries) | (set(policy.entries) if policy is not None else set()))
    key_len = len(states[0]) if states else 0
    require(all(len(s) == key_len for s in states), 'State keys must share one length.',
            AegisStructuralError)
    parts = [TABLE_HEADER.pack(S.nn.tables_magic, S.nn.format_version, table.n_actions, key_len,
                               len(states), 1 if policy is not None else 0)]
    for s in states:
        parts.append(struct.pack('<%dH' % key_len, *s))
        parts.append(numpy.asarray(table.values(s), dtype='<f8').tobytes())
        if policy is not None:
            parts.append(numpy.asarray(policy.probabilities(s), dtype='<f8').tobytes())
    return b''.join(parts)


def save_tables(path, table, policy=None):
    return data_utils.atomic_write_bytes(path, tables_bytes(table, policy))


def tables_from_bytes(data, path='<bytes>'):
    if len(data) < TABLE_HEADER.size:
        raise AegisIOError(path, 'truncated header (%d bytes)' % len(data))
    magic, version, n_actions, key_len, n_states, has_policy = TABLE_HEADER.unpack_from(data)
    if magic != S.nn.tables_magic:
        raise AegisFormatError(path, 'bad magic %r' % magic)
    if version != S.nn.format_version:
        raise AegisFormatError(path, 'unsupported version %d' % version)
    if n_actions < 1 or has_policy not in (0, 1):
        raise AegisFormatError(path, 'inconsistent table header')
    entry = 2 * key_len + 8 * n_actions * (1 + has_policy)
    expected = TABLE_HEADER.size + entry * n_states
    if len(data) < expected:
        raise AegisIOError(path, 'truncated: %d of %d bytes' % (len(data), expected))
    if len(data) > expected:
        raise AegisFormatError(path, '%d trailing bytes' % (len(data) - expected))
    table = QTable(n_actions)
    policy = MixedPolicy(n_actions) if has_policy else None
    offset = TABLE_HEADER.size
    for _ in range(n_states):
        s = struct.unpack_from('<%dH' % key_len, data, offset)
        offset += 2 * key_len
        table.entries[s] = numpy.frombuffer(data, '<f8', n_actions, offset).astype(float)
        offset += 8 * n_actions
        if has_policy:
            policy.entries[s] = numpy.frombuffer(data, '<f8', n_actions, offset).astype(float)
            offset += 8 * n_actions
    return table, policy


def load_tables(path):
    return tables_from_bytes(data_utils.read_bytes(path), path)
