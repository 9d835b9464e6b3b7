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

import argparse
import io

import pandas
import pytest

import aegis.settings as S
from aegis import cli, selftest, utils
from aegis.client import Client, exit_code_for
from aegis.utils import AegisNumericError

SCENARIO = """\
uav.agent = qlearn
jammer.kind = smart
run.slots = 40
run.window = 10
"""


def make_client():
    out = io.StringIO()
    return Client(out=out), out


@pytest.fixture
def scenario_path(tmp_path):
    path = tmp_path / 'test.scenario'
    path.write_text(SCENARIO)
    return str(path)


def test_exit_codes():
    assert exit_code_for(utils.AegisConfigError('x')) == 2
    assert exit_code_for(utils.AegisIOError('f', 'gone')) == 3
    assert exit_code_for(utils.AegisFormatError('f', 'bad')) == 3
    assert exit_code_for(AegisNumericError('loss', float('nan'), 3)) == 4
    assert exit_code_for(utils.AegisDomainError('x')) == 2


def test_run_writes_trace_and_summaries(scenario_path, tmp_path):
    client, out = make_client()
    trace_path = tmp_path / 'out' / 'episode.csv'
    code = client.execute('run', dict(config=scenario_path, seed=3, out=str(trace_path)))
    assert code == S.exit_codes.ok
    frame = pandas.read_csv(trace_path)
    assert len(frame) == 40
    for suffix in ('-ber.dat', '-energy.dat', '-report.txt'):
        assert (tmp_path / 'out' / ('episode' + suffix)).exists()
    assert 'convergence slot' in out.getvalue()


def test_overrides_apply(scenario_path, tmp_path):
    client, _ = make_client()
    config = client.load_config(scenario_path, run__slots=7, uav__case=None)
    assert config.run.slots == 7
    assert config.uav.case == 1


def test_config_errors_exit_2(tmp_path):
    bad = tmp_path / 'bad.scenario'
    bad.write_text('run.slots = -5\n')
    client, out = make_client()
    assert client.execute('run', dict(config=str(bad), out=str(tmp_path / 't.csv'))) == 2
    assert 'run.slots' in out.getvalue()
    unknown = tmp_path / 'unknown.scenario'
    unknown.write_text('run.slot = 5\n')
    assert client.execute('run', dict(config=str(unknown))) == 2
    assert 'Line 1' in out.getvalue()


def test_missing_scenario_exits_3(tmp_path):
    client, _ = make_client()
    assert client.execute('run', dict(config=str(tmp_path / 'none.scenario'))) == 3


def test_debug_raises(tmp_path):
    client, _ = make_client()
    with pytest.raises(utils.AegisIOError):
        client.execute('run', dict(config=str(tmp_path / 'none.scenario')), debug=True)


class ExplodingEngine(object):
    def run(self, config, out_path, hotboot_dir=None):
        raise AegisNumericError('CNN loss', float('inf'), 12)


def test_numeric_errors_exit_4():
    out = io.StringIO()
    client = Client(engine=ExplodingEngine(), out=out)
    assert client.execute('run', {}) == 4
    assert 'slot 12' in out.getvalue()


def test_pretrain(scenario_path, tmp_path):
    client, out = make_client()
    store = tmp_path / 'hotboot'
    code = client.execute('pretrain', dict(config=scenario_path, out=str(store), scenarios=1,
                                           slots=20, seed=4))
    assert code == 0
    files = list(store.iterdir())
    assert len(files) == 1 and files[0].suffix == '.uavt'
    assert files[0].name in out.getvalue()


def test_pretrain_nothing(scenario_path, tmp_path):
    client, out = make_client()
    code = client.execute('pretrain', dict(config=scenario_path, out=str(tmp_path / 'h'),
                                           scenarios=0, slots=20))
    assert code == 0
    assert 'no file written' in out.getvalue()


def test_sweep(scenario_path, tmp_path):
    client, out = make_client()
    out_dir = tmp_path / 'sweep'
    code = client.execute('sweep', dict(config=scenario_path, agents=['qlearn', 'fixed'],
                                        seeds=[1, 2], out=str(out_dir), slots=30))
    assert code == 0
    for name in ('qlearn-seed1.csv', 'qlearn-seed2.csv', 'fixed-seed1.csv', 'fixed-seed2.csv',
                 'qlearn-ber.dat', 'fixed-energy.dat', 'aggregate.csv', 'report.txt'):
        assert (out_dir / name).exists(), name
    aggregate = pandas.read_csv(out_dir / 'aggregate.csv')
    assert aggregate['agent'].tolist() == ['qlearn', 'fixed']
    assert aggregate['seeds'].tolist() == [2, 2]
    assert 'Medians over 2 seeds' in out.getvalue()


def test_sweep_rejects_duplicate_seeds(scenario_path, tmp_path):
    client, _ = make_client()
    assert client.execute('sweep', dict(config=scenario_path, agents=['fixed'], seeds=[1, 1],
                                        out=str(tmp_path / 's'))) == 2


def test_selftest_fault_injection():
    client, out = make_client()
    code = client.execute('selftest', dict(gradient_fn=selftest.faulty_gradients()))
    assert code == S.exit_codes.selftest_failed
    assert 'FAILED' in out.getvalue()
    assert 'CNN gradients' in out.getvalue().split('Failed checks:')[1]


def test_parse_seeds():
    assert cli.parse_seeds('1..4') == [1, 2, 3, 4]
    assert cli.parse_seeds('3,1,7') == [3, 1, 7]
    for text in ('a..b', '', '5..1'):
        with pytest.raises(argparse.ArgumentTypeError):
            cli.parse_seeds(text)


def test_parse_agents():
    assert cli.parse_agents('drlur, hpur') == ['drlur', 'hpur']
    with pytest.raises(argparse.ArgumentTypeError):
        cli.parse_agents('drlur,sarsa')


def test_command_line_run(scenario_path, tmp_path):
    client, out = make_client()
    code = cli.main(['run', '--config', scenario_path, '--slots', '15', '--case', '2',
                     '--out', str(tmp_path / 'cli.csv')], client=client)
    assert code == 0
    assert len(pandas.read_csv(tmp_path / 'cli.csv')) == 15


def test_command_line_rejects_bad_arguments():
    with pytest.raises(SystemExit) as e:
        cli.main(['run', '--case', '3'], client=make_client()[0])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        cli.main(['train'], client=make_client()[0])
    assert e.value.code == 2
