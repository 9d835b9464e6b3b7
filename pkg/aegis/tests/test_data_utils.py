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

import pandas
import pytest

from aegis import data_utils
from aegis.utils import AegisIOError, format_float


def test_atomic_write_leaves_no_temporary_files(tmp_path):
    path = str(tmp_path / 'a.txt')
    data_utils.atomic_write_text(path, 'first\n')
    data_utils.atomic_write_text(path, 'second\n')
    assert data_utils.read_text(path) == 'second\n'
    assert os.listdir(str(tmp_path)) == ['a.txt']


def test_write_into_missing_directory(tmp_path):
    with pytest.raises(AegisIOError):
        data_utils.atomic_write_text(str(tmp_path / 'missing' / 'a.txt'), 'x')
    with pytest.raises(AegisIOError):
        data_utils.read_bytes(str(tmp_path / 'missing.bin'))


def test_dat_text():
    assert data_utils.dat_text([1, 2], [0.5, 0.1]) == '1 0.5\n2 0.1\n'
    assert data_utils.dat_text([], []) == ''


def test_shortest_round_trip_floats():
    for value in (0.1, 1e-300, 0.07864960352514258, 150.0):
        assert float(format_float(value)) == value
    assert format_float(0.1) == '0.1'


def test_trace_csv_needs_every_column(tmp_path):
    path = str(tmp_path / 'partial.csv')
    pandas.DataFrame(dict(slot=[1], pe=[0.1])).to_csv(path, index=False)
    with pytest.raises(AegisIOError):
        data_utils.read_trace_csv(path)
    with pytest.raises(AegisIOError):
        data_utils.read_trace_csv(str(tmp_path / 'none.csv'))
