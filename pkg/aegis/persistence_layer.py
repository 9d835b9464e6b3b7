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

import logging
import os

import aegis.settings as S
from aegis import data_utils, nn, tabular
from aegis.utils import AegisStructuralError, digest_bytes, digest_text

logger = logging.getLogger(__name__)

# sections that define "the same scenario" for hotboot reuse
SCENARIO_SECTIONS = ('radio', 'channel', 'jammer')


def scenario_key(config):
    lines = [line for line in config.to_text().splitlines()
             if line.split('.', 1)[0] in SCENARIO_SECTIONS]
    return digest_text('\n'.join(lines))


class PersistenceLayer(object):
    """
    The hotboot store: one directory of pretrained artifacts.

    <agent>-<scenario key>.uavq: CNN weights of the deep-RL agent.
    <agent>-<scenario key>.uavt: Q-table (and PHC policy) of a tabular agent.

    The scenario key digests the radio, channel and jammer sections, so a
    pretrained artifact is found again for runs that only differ in seed,
    episode length or learning parameters.
    """

    def __init__(self, store_dir):
        self.store_dir = store_dir

    def path_for(self, kind, config):
        suffix = S.nn.weights_suffix if kind == 'drlur' else S.nn.tables_suffix
        return os.path.join(self.store_dir, '%s-%s%s' % (kind, scenario_key(config), suffix))

    def encode(self, kind, artifact):
        if kind == 'drlur':
            return nn.weights_bytes(artifact, artifact.architecture())
        if kind in ('hpur', 'qlearn'):
            table, policy = artifact
            return tabular.tables_bytes(table, policy)
        raise AegisStructuralError('Agent %r has nothing to persist.' % kind)

    def decode(self, kind, data, path):
        if kind == 'drlur':
            return nn.weights_from_bytes(data, path)
        return tabular.tables_from_bytes(data, path)

    def save(self, kind, config, artifact):
        """ Returns (path, digest of the written bytes). """
        data_utils.ensure_dir(self.store_dir)
        data = self.encode(kind, artifact)
        path = data_utils.atomic_write_bytes(self.path_for(kind, config), data)
        logger.info('saved %s hotboot artifact to %s', kind, path)
        return path, digest_bytes(data)

    def has(self, kind, config):
        return os.path.exists(self.path_for(kind, config))

    def load(self, kind, config):
        """ The stored artifact, or None when this scenario was never pretrained. """
        path = self.path_for(kind, config)
        if not os.path.exists(path):
            return None
        artifact = self.decode(kind, data_utils.read_bytes(path), path)
        logger.info('loaded %s hotboot artifact from %s', kind, path)
        return artifact
