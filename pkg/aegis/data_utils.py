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

import csv
import io
import logging
import os
import tempfile

import pandas

from aegis.utils import AegisIOError, format_float

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ('slot', 'x_mW', 'y_mW', 'rho1', 'rho2', 'rho3', 'pe', 'u_uav', 'u_jam',
                 'energy_mJ', 'eps', 'h1', 'h2', 'h3', 'h4', 'h5')


def ensure_dir(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as e:
        raise AegisIOError(path, e.strerror or str(e))
    return path


def atomic_write_bytes(path, data):
    """
    Writes data to a temporary file next to path and renames it into place, so
    readers see either the old file or the complete new one.
    """
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp_path = tempfile.mkstemp(prefix='.tmp-', dir=directory)
    except OSError as e:
        raise AegisIOError(path, e.strerror or str(e))
    try:
        with os.fdopen(fd, 'wb') as f:
            f.write(data)
        os.replace(tmp_path, path)
    except OSError as e:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise AegisIOError(path, e.strerror or str(e))
    logger.debug('wrote %d bytes to %s', len(data), path)
    return path


def atomic_write_text(path, text):
    return atomic_write_bytes(path, text.encode('utf-8'))


def read_bytes(path):
    try:
        with open(path, 'rb') as f:
            return f.read()
    except OSError as e:
        raise AegisIOError(path, e.strerror or str(e))


def read_text(path):
    return read_bytes(path).decode('utf-8')


def record_row(record):
    row = [str(int(record.slot))]
    for column in TRACE_COLUMNS[1:]:
        row.append(format_float(getattr(record, column)))
    return row


def trace_csv_text(records):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(TRACE_COLUMNS)
    for record in records:
        writer.writerow(record_row(record))
    return out.getvalue()


def write_trace_csv(path, records):
    return atomic_write_text(path, trace_csv_text(records))


def read_trace_csv(path):
    if not os.path.exists(path):
        raise AegisIOError(path, 'no such file')
    try:
        frame = pandas.read_csv(path, float_precision='round_trip')
    except (OSError, ValueError) as e:
        raise AegisIOError(path, str(e))
    missing = [c for c in TRACE_COLUMNS if c not in frame.columns]
    if missing:
        raise AegisIOError(path, 'missing trace columns %s' % ', '.join(missing))
    return frame


def dat_text(slots, values):
    """ Plot-ready two-column text: one 'slot value' pair per line. """
    lines = ['%d %s' % (int(k), format_float(v)) for k, v in zip(slots, values)]
    return '\n'.join(lines) + ('\n' if lines else '')


def write_dat(path, slots, values):
    return atomic_write_text(path, dat_text(slots, values))


def write_frame_csv(path, frame):
    return atomic_write_text(path, frame.to_csv(index=False, lineterminator='\n'))
