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

import pytest

from aegis.engine import Engine
from aegis.scenario import default_config
from aegis.utils import AegisConfigError

engine = Engine()


def test_reference_of_the_default_scenario():
    eq = engine.reference(default_config())
    assert 0 < eq.ber <= 0.5
    assert eq.u_uav < 0


def test_pretrain_writes_one_artifact(tmp_path):
    config = default_config().with_values(uav__agent='qlearn').validate()
    result = engine.pretrain(config, str(tmp_path), scenarios=1, slots=15, seed=2)
    [artifact] = result['artifacts']
    assert os.path.exists(artifact['path'])
    assert engine.pretrain(config, str(tmp_path / 'empty'), 0, 15, 2)['artifacts'] == []


def test_run_result(tmp_path):
    config = default_config().with_values(uav__agent='fixed', run__slots=12).validate()
    result = engine.run(config, str(tmp_path / 'run.csv'))
    assert len(result['trace']) == 12
    assert result['summary'].slots == 12
    assert all(os.path.exists(p) for p in result['paths'])


def test_sweep_needs_agents(tmp_path):
    with pytest.raises(AegisConfigError):
        engine.sweep(default_config(), [], [1], str(tmp_path))


def test_selftest_result():
    result = engine.selftest(qpsk_symbols=20000)
    assert len(result['checks']) == 4
    assert result['passed'] == all(c.passed for c in result['checks'])
