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
Random streams and special functions shared by every other module.

Every stochastic component owns a RandomStream obtained by splitting the run's
root stream with a component label. Splitting only extends the numpy
SeedSequence spawn key, so it never consumes the parent's state and a child is
a pure function of (seed, label path).
"""

import math
import zlib

import numpy
import scipy.special

from aegis.utils import AegisDomainError

MASK64 = (1 << 64) - 1


def label_key(label):
    return zlib.crc32(label.encode('utf-8')) & 0xffffffff


class RandomStream(object):
    def __init__(self, seed, label='root', spawn_key=()):
        self.seed = int(seed) & MASK64
        self.label = label
        self.spawn_key = tuple(spawn_key)
        sequence = numpy.random.SeedSequence(self.seed, spawn_key=self.spawn_key)
        self.generator = numpy.random.Generator(numpy.random.PCG64(sequence))

    def split(self, label):
        return RandomStream(self.seed, label='%s/%s' % (self.label, label),
                            spawn_key=self.spawn_key + (label_key(label),))

    def random(self):
        return float(self.generator.random())

    def uniform(self, low, high):
        return float(self.generator.uniform(low, high))

    def integer(self, n):
        """ Uniform integer in [0, n). """
        return int(self.generator.integers(0, n))

    def integers(self, n, size):
        return self.generator.integers(0, n, size=size)

    def normal(self, size=None):
        if size is None:
            return float(self.generator.standard_normal())
        return self.generator.standard_normal(size)

    def choice(self, probabilities):
        """ Index drawn from a probability vector by inverse CDF on one uniform. """
        cdf = numpy.cumsum(probabilities)
        u = self.random() * cdf[-1]
        return int(min(numpy.searchsorted(cdf, u, side='right'), len(cdf) - 1))

    def __repr__(self):
        return 'RandomStream(seed=%d, label=%r)' % (self.seed, self.label)


def split(stream, label):
    return stream.split(label)


def erfc(x):
    x = float(x)
    if not math.isfinite(x):
        raise AegisDomainError('erfc is defined for finite arguments, got %r.' % x)
    return float(scipy.special.erfc(x))


def gaussian(stream, mu, sigma):
    if sigma < 0:
        raise AegisDomainError('Gaussian sigma must be >= 0, got %r.' % sigma)
    if sigma == 0:
        return float(mu)
    return mu + sigma * stream.normal()


def lognormal_db(stream, mean_db, sigma_db):
    if sigma_db < 0:
        raise AegisDomainError('Shadowing sigma must be >= 0 dB, got %r.' % sigma_db)
    return 10.0 ** (gaussian(stream, mean_db, sigma_db) / 10.0)


def db_to_linear(db):
    return 10.0 ** (db / 10.0)
