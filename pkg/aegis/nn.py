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
The fixed-topology convolutional Q-network used by the DRLUR relay agent.

    12x12 input -> conv 20@6x6 -> ReLU -> conv 40@5x5 -> ReLU
                -> FC 1000 -> ReLU -> FC 31 (linear Q-values)

Convolutions are valid (no padding) with stride 1. Everything runs in float64
on numpy; the backward pass is exact, which the finite-difference check in
gradient_check verifies.
"""

import logging
import math
import struct
from dataclasses import dataclass, fields

import numpy
from numpy.lib.stride_tricks import sliding_window_view

import aegis.settings as S
from aegis import data_utils
from aegis.utils import (AegisConfigError, AegisFormatError, AegisIOError, AegisNumericError,
                         AegisStructuralError, check_finite)

logger = logging.getLogger(__name__)

PARAM_ORDER = ('conv1_w', 'conv1_b', 'conv2_w', 'conv2_b', 'fc1_w', 'fc1_b', 'fc2_w', 'fc2_b')
HEADER = struct.Struct('<4sH7H')


@dataclass(frozen=True)
class CnnArchitecture:
    n1: int = S.nn.n1
    n2: int = S.nn.n2
    n3: int = S.nn.n3
    f1: int = S.nn.f1
    f2: int = S.nn.f2
    r1: int = S.nn.r1
    r2: int = S.nn.r2

    @property
    def conv1_side(self):
        return self.n1 - self.n2 + 1

    @property
    def conv2_side(self):
        return self.n1 - self.n2 - self.n3 + 2

    @property
    def flat_size(self):
        return self.f2 * self.conv2_side ** 2

    def shapes(self):
        return dict(conv1_w=(self.f1, self.n2, self.n2), conv1_b=(self.f1,),
                    conv2_w=(self.f2, self.f1, self.n3, self.n3), conv2_b=(self.f2,),
                    fc1_w=(self.r1, self.flat_size), fc1_b=(self.r1,),
                    fc2_w=(self.r2, self.r1), fc2_b=(self.r2,))

    def fan_ins(self):
        return dict(conv1_w=self.n2 ** 2, conv2_w=self.f1 * self.n3 ** 2,
                    fc1_w=self.flat_size, fc2_w=self.r1)

    def parameter_count(self):
        return sum(int(numpy.prod(shape)) for shape in self.shapes().values())

    def validate(self):
        for f in fields(self):
            if getattr(self, f.name) < 1:
                raise AegisConfigError('CNN dimension %s must be >= 1.' % f.name)
        if self.conv2_side < 1:
            raise AegisConfigError('Input side %d is too small for %dx%d and %dx%d filters.'
                                   % (self.n1, self.n2, self.n2, self.n3, self.n3))
        return self


@dataclass
class CnnWeights:
    """ All network parameters; the same container also carries gradients. """
    conv1_w: numpy.ndarray
    conv1_b: numpy.ndarray
    conv2_w: numpy.ndarray
    conv2_b: numpy.ndarray
    fc1_w: numpy.ndarray
    fc1_b: numpy.ndarray
    fc2_w: numpy.ndarray
    fc2_b: numpy.ndarray

    def arrays(self):
        return [getattr(self, name) for name in PARAM_ORDER]

    def items(self):
        return [(name, getattr(self, name)) for name in PARAM_ORDER]

    def copy(self):
        return CnnWeights(*[a.copy() for a in self.arrays()])

    def architecture(self):
        f1, n2, _ = self.conv1_w.shape
        f2, _, n3, _ = self.conv2_w.shape
        r1, flat = self.fc1_w.shape
        r2 = self.fc2_w.shape[0]
        side = int(round(math.sqrt(flat / f2)))
        return CnnArchitecture(n1=side + n2 + n3 - 2, n2=n2, n3=n3, f1=f1, f2=f2, r1=r1, r2=r2)

    def validate(self, arch):
        for name, shape in arch.shapes().items():
            if getattr(self, name).shape != shape:
                raise AegisStructuralError('Weight %s has shape %s, expected %s.'
                                           % (name, getattr(self, name).shape, shape))
        for name, array in self.items():
            check_finite('weight %s' % name, array)
        return self

    def as_vector(self):
        return numpy.concatenate([a.ravel() for a in self.arrays()])

    @classmethod
    def from_vector(cls, arch, vector):
        out, offset = [], 0
        shapes = arch.shapes()
        for name in PARAM_ORDER:
            size = int(numpy.prod(shapes[name]))
            out.append(numpy.array(vector[offset:offset + size], dtype=float).reshape(shapes[name]))
            offset += size
        return cls(*out)

    @classmethod
    def zeros(cls, arch):
        return cls(*[numpy.zeros(arch.shapes()[name]) for name in PARAM_ORDER])


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = S.uav.learning_rate
    batch_size: int = S.uav.batch_size
    gamma: float = S.uav.gamma

    def validate(self):
        if not self.learning_rate > 0:
            raise AegisConfigError('Learning rate must be > 0, got %r.' % self.learning_rate)
        if self.batch_size < 1:
            raise AegisConfigError('Batch size must be >= 1, got %r.' % self.batch_size)
        if not 0 <= self.gamma < 1:
            raise AegisConfigError('Discount gamma must be in [0, 1), got %r.' % self.gamma)
        return self


def init_weights(arch, stream):
    """ He initialization: weights ~ N(0, 2 / fan_in), biases zero. """
    shapes = arch.shapes()
    fan_ins = arch.fan_ins()
    arrays = []
    for name in PARAM_ORDER:
        if name in fan_ins:
            std = math.sqrt(2.0 / fan_ins[name])
            arrays.append(std * stream.normal(size=shapes[name]))
        else:
            arrays.append(numpy.zeros(shapes[name]))
    return CnnWeights(*arrays)


def _relu(z):
    return numpy.maximum(z, 0.0)


def _as_batch(arch, inputs):
    x = numpy.asarray(inputs, dtype=float)
    if x.ndim == 2:
        x = x[None]
    if x.ndim != 3 or x.shape[1:] != (arch.n1, arch.n1):
        raise AegisStructuralError('CNN input must be %dx%d, got shape %s.'
                                   % (arch.n1, arch.n1, numpy.shape(inputs)))
    return x


def _forward_batch(arch, weights, x):
    n = x.shape[0]
    win1 = sliding_window_view(x, (arch.n2, arch.n2), axis=(1, 2))
    z1 = numpy.einsum('nijuv,fuv->nfij', win1, weights.conv1_w, optimize=True)
    z1 += weights.conv1_b[None, :, None, None]
    a1 = _relu(z1)
    win2 = sliding_window_view(a1, (arch.n3, arch.n3), axis=(2, 3))
    z2 = numpy.einsum('ncijuv,fcuv->nfij', win2, weights.conv2_w, optimize=True)
    z2 += weights.conv2_b[None, :, None, None]
    a2 = _relu(z2)
    flat = a2.reshape(n, -1)
    z3 = flat @ weights.fc1_w.T + weights.fc1_b
    a3 = _relu(z3)
    q = a3 @ weights.fc2_w.T + weights.fc2_b
    cache = dict(win1=win1, z1=z1, win2=win2, z2=z2, flat=flat, z3=z3, a3=a3)
    return q, cache


def forward(arch, weights, inputs):
    """
    Q-values for one 12x12 input (returns shape (r2,)) or a stack of inputs
    (returns shape (n, r2)).
    """
    x = _as_batch(arch, inputs)
    check_finite('CNN input', x)
    q, _ = _forward_batch(arch, weights, x)
    if numpy.ndim(inputs) == 2:
        return q[0]
    return q


def _backward(arch, weights, cache, dq):
    n = dq.shape[0]
    grads = {}
    grads['fc2_w'] = dq.T @ cache['a3']
    grads['fc2_b'] = dq.sum(axis=0)
    dz3 = (dq @ weights.fc2_w) * (cache['z3'] > 0)
    grads['fc1_w'] = dz3.T @ cache['flat']
    grads['fc1_b'] = dz3.sum(axis=0)
    side2 = arch.conv2_side
    dz2 = (dz3 @ weights.fc1_w).reshape(n, arch.f2, side2, side2) * (cache['z2'] > 0)
    grads['conv2_w'] = numpy.einsum('nfij,ncijuv->fcuv', dz2, cache['win2'], optimize=True)
    grads['conv2_b'] = dz2.sum(axis=(0, 2, 3))
    da1 = numpy.zeros_like(cache['z1'])
    for u in range(arch.n3):
        for v in range(arch.n3):
            da1[:, :, u:u + side2, v:v + side2] += numpy.einsum(
                'nfij,fc->ncij', dz2, weights.conv2_w[:, :, u, v])
    dz1 = da1 * (cache['z1'] > 0)
    grads['conv1_w'] = numpy.einsum('nfij,nijuv->fuv', dz1, cache['win1'], optimize=True)
    grads['conv1_b'] = dz1.sum(axis=(0, 2, 3))
    return CnnWeights(**grads)


def loss_and_gradients(arch, weights, batch):
    """
    Mean squared error between q[action] and the target over the batch, and its
    exact gradient. `batch` is a sequence of (input, action_index, target_q).
    """
    if len(batch) == 0:
        raise AegisStructuralError('Cannot compute a loss on an empty batch.')
    inputs, actions, targets = zip(*batch)
    actions = numpy.asarray(actions, dtype=int)
    targets = numpy.asarray(targets, dtype=float)
    if numpy.any(actions < 0) or numpy.any(actions >= arch.r2):
        raise AegisStructuralError('Action indices must be in [0, %d].' % (arch.r2 - 1))
    if not numpy.all(numpy.isfinite(targets)):
        raise AegisNumericError('target Q-value', targets[~numpy.isfinite(targets)][0])
    x = _as_batch(arch, numpy.stack([numpy.asarray(i, dtype=float) for i in inputs]))
    q, cache = _forward_batch(arch, weights, x)
    n = len(batch)
    rows = numpy.arange(n)
    diff = q[rows, actions] - targets
    loss = float(numpy.mean(diff ** 2))
    dq = numpy.zeros_like(q)
    dq[rows, actions] = 2.0 * diff / n
    return loss, _backward(arch, weights, cache, dq)


def sgd_step(weights, gradients, learning_rate):
    updated = []
    for name, w in weights.items():
        g = getattr(gradients, name)
        if g.shape != w.shape:
            raise AegisStructuralError('Gradient %s has shape %s, weight has %s.'
                                       % (name, g.shape, w.shape))
        updated.append(w - learning_rate * g)
    return CnnWeights(*updated)


def multiply_counts(arch):
    """ Multiplications per forward pass, by layer. """
    conv1_out = (arch.f1, arch.conv1_side, arch.conv1_side)
    conv2_out = (arch.f2, arch.conv2_side, arch.conv2_side)
    shapes = arch.shapes()
    return dict(
        conv1=int(numpy.prod(conv1_out) * numpy.prod(shapes['conv1_w'][1:])),
        conv2=int(numpy.prod(conv2_out) * numpy.prod(shapes['conv2_w'][1:])),
        fc1=int(numpy.prod(shapes['fc1_w'])),
        fc2=int(numpy.prod(shapes['fc2_w'])))


def weights_bytes(weights, arch):
    weights.validate(arch)
    header = HEADER.pack(S.nn.weights_magic, S.nn.format_version, arch.n1, arch.n2, arch.n3,
                         arch.f1, arch.f2, arch.r1, arch.r2)
    return header + weights.as_vector().astype('<f8').tobytes()


def save_weights(weights, arch, path):
    """
    Layout: magic 'UAVQ', u16 version, u16 n1 n2 n3 f1 f2 r1 r2, then every
    parameter as little-endian float64 in PARAM_ORDER, arrays row-major.
    """
    return data_utils.atomic_write_bytes(path, weights_bytes(weights, arch))


def weights_from_bytes(data, path='<bytes>'):
    if len(data) < HEADER.size:
        raise AegisIOError(path, 'truncated header (%d bytes)' % len(data))
    magic, version, n1, n2, n3, f1, f2, r1, r2 = HEADER.unpack_from(data)
    if magic != S.nn.weights_magic:
        raise AegisFormatError(path, 'bad magic %r' % magic)
    if version != S.nn.format_version:
        raise AegisFormatError(path, 'unsupported version %d' % version)
    arch = CnnArchitecture(n1, n2, n3, f1, f2, r1, r2)
    try:
        arch.validate()
    except AegisConfigError as e:
        raise AegisFormatError(path, 'inconsistent shape header (%s)' % e.msg)
    expected = HEADER.size + 8 * arch.parameter_count()
    if len(data) < expected:
        raise AegisIOError(path, 'truncated: %d of %d bytes' % (len(data), expected))
    if len(data) > expected:
        raise AegisFormatError(path, '%d trailing bytes' % (len(data) - expected))
    vector = numpy.frombuffer(data, dtype='<f8', offset=HEADER.size).astype(float)
    weights = CnnWeights.from_vector(arch, vector)
    try:
        weights.validate(arch)
    except AegisNumericError:
        raise AegisFormatError(path, 'non-finite parameters')
    return weights


def load_weights(path):
    return weights_from_bytes(data_utils.read_bytes(path), path)


@dataclass
class GradientCheck:
    max_rel_error: float
    tolerance: float
    samples: list

    @property
    def passed(self):
        return self.max_rel_error < self.tolerance


def relative_error(a, b):
    return abs(a - b) / max(abs(a) + abs(b), 1e-6)


def gradient_check(arch, weights, batch, n_params, stream, step=S.selftest.gradient_step,
                   tolerance=S.selftest.gradient_tolerance, gradient_fn=None):
    """
    Compares analytic gradients with central differences on n_params randomly
    chosen parameters. The first bias of conv1 is always among them.
    `gradient_fn` replaces loss_and_gradients, which lets tests inject faults.
    """
    gradient_fn = gradient_fn or loss_and_gradients
    _, grads = gradient_fn(arch, weights, batch)
    shapes = arch.shapes()
    sizes = [int(numpy.prod(shapes[name])) for name in PARAM_ORDER]
    offsets = numpy.cumsum([0] + sizes)
    picks = [('conv1_b', 0)]
    for flat in stream.integers(offsets[-1], size=max(n_params - 1, 0)):
        i = int(numpy.searchsorted(offsets, flat, side='right')) - 1
        picks.append((PARAM_ORDER[i], int(flat - offsets[i])))
    samples = []
    for name, index in picks:
        probe = weights.copy()
        target = getattr(probe, name).reshape(-1)
        original = target[index]
        target[index] = original + step
        plus, _ = loss_and_gradients(arch, probe, batch)
        target[index] = original - step
        minus, _ = loss_and_gradients(arch, probe, batch)
        numeric = (plus - minus) / (2.0 * step)
        analytic = float(getattr(grads, name).reshape(-1)[index])
        samples.append((name, index, analytic, numeric, relative_error(analytic, numeric)))
    worst = max(s[-1] for s in samples)
    logger.debug('gradient check over %d parameters: max relative error %.3g', len(samples), worst)
    return GradientCheck(worst, tolerance, samples)
