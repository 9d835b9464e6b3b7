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
Hotbooting: pretraining a relay agent over episodes in scenarios similar to
the target one, so a run can start from learned weights or tables.
"""

import logging

from aegis import agents, channel, game
from aegis.numerics import RandomStream
from aegis.utils import AegisConfigError

logger = logging.getLogger(__name__)

MAX_PERTURB_ATTEMPTS = 20


def _jitter_pos(pos, fraction, stream):
    x, y, z = pos
    return (x * (1 + stream.uniform(-fraction, fraction)),
            y * (1 + stream.uniform(-fraction, fraction)), z)


def _perturb_once(config, stream):
    c = config.channel
    r = config.run
    if c.mode == 'geometry':
        user = _jitter_pos(c.user_pos, r.hotboot_jitter_pos, stream)
        dist = channel.distance(user, c.bs0_pos)
        if dist > c.cell_radius:
            scale = c.cell_radius / dist
            user = (c.bs0_pos[0] + (user[0] - c.bs0_pos[0]) * scale,
                    c.bs0_pos[1] + (user[1] - c.bs0_pos[1]) * scale, user[2])
        return config.with_values(
            channel__user_pos=user,
            channel__jammer_pos=_jitter_pos(c.jammer_pos, r.hotboot_jitter_pos, stream),
            channel__uav_pos=_jitter_pos(c.uav_pos, r.hotboot_jitter_pos, stream),
            channel__bs1_pos=_jitter_pos(c.bs1_pos, r.hotboot_jitter_pos, stream),
            channel__mean_db_at_ref=c.mean_db_at_ref + stream.uniform(-r.hotboot_jitter_db,
                                                                       r.hotboot_jitter_db))
    mean_db = tuple(m + stream.uniform(-r.hotboot_jitter_db, r.hotboot_jitter_db)
                    for m in c.mean_db)
    return config.with_values(channel__mean_db=mean_db)


def perturb(config, stream):
    """
    A similar scenario: channel means jittered uniformly within +-jitter_db and,
    in geometry mode, node coordinates within +-jitter_pos (relative).
    """
    for _ in range(MAX_PERTURB_ATTEMPTS):
        candidate = _perturb_once(config, stream)
        try:
            return candidate.validate()
        except AegisConfigError:
            continue
    logger.warning('no valid perturbation after %d attempts; reusing the scenario as is',
                   MAX_PERTURB_ATTEMPTS)
    return config


def export_artifact(agent):
    if agent.kind == 'drlur':
        return agent.weights.copy()
    if agent.kind == 'hpur':
        return agent.table.copy(), agent.policy.copy()
    if agent.kind == 'qlearn':
        return agent.table.copy(), None
    raise AegisConfigError('The %s agent has nothing to pretrain.' % agent.kind)


def hotboot(config, scenarios=None, slots=None, seed=None, store=None):
    """
    Trains one fresh agent of config.uav.agent sequentially over `scenarios`
    perturbed episodes of `slots` slots each and returns its weights (DRLUR) or
    (table, policy) pair (tabular agents). Saves them to `store` when given.
    Returns None when there is nothing to train on.
    """
    kind = config.uav.agent
    scenarios = config.run.hotboot_scenarios if scenarios is None else scenarios
    slots = config.run.hotboot_slots if slots is None else slots
    seed = config.run.seed if seed is None else seed
    if kind == 'fixed':
        raise AegisConfigError('The fixed agent has nothing to pretrain.')
    if slots < 1:
        raise AegisConfigError('Hotboot episodes need at least one slot, got %r.' % slots)
    if scenarios < 1:
        logger.warning('hotboot asked for %d scenarios; the agent keeps its fresh '
                       'initialization', scenarios)
        return None
    root = RandomStream(seed).split('hotboot')
    base = config.with_values(run__slots=slots).validate()
    agent = agents.make_agent(base, root.split('init'), slots=slots)
    for g in range(scenarios):
        scenario = perturb(base, root.split('scenario-%d' % g))
        world = game.World(scenario, uav_agent=agent, stream=root.split('episode-%d' % g))
        utility = 0.0
        for k in range(1, slots + 1):
            utility += game.run_slot(world, k).u_uav
        logger.info('hotboot episode %d/%d: mean utility %.6g', g + 1, scenarios,
                    utility / slots)
    artifact = export_artifact(agent)
    if store is not None:
        store.save(kind, config, artifact)
    return artifact
