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
SINR, QPSK bit-error rates, the relay game utilities and energy accounting.

The message BER takes the better of the direct user->BS0 path and the two-hop
relay path user->UAV->BS1, where the relay path is limited by its weaker hop:

    P_e = 0.5 erfc(max(sqrt(P h1 / (sigma + y h3)),
                       min(sqrt(P h2 / (sigma + y h4)), sqrt(x h5 / sigma))))
"""

import math
from dataclasses import dataclass

import numpy
import scipy.special

import aegis.settings as S
from aegis import numerics
from aegis.utils import AegisConfigError, AegisDomainError


@dataclass(frozen=True)
class RadioConfig:
    user_power: float = S.radio.user_power
    noise_power: float = S.radio.noise_power
    relay_cost: float = S.radio.relay_cost
    jam_cost: float = S.radio.jam_cost
    max_uav_power: float = S.radio.max_uav_power
    max_jam_power: float = S.radio.max_jam_power
    slot_duration: float = S.radio.slot_duration
    max_user_power: float = S.radio.max_user_power
    uav_power_step: float = S.radio.uav_power_step
    jam_power_step: float = S.radio.jam_power_step

    def validate(self):
        for name in ('user_power', 'noise_power', 'relay_cost', 'max_uav_power',
                     'max_jam_power', 'slot_duration', 'uav_power_step', 'jam_power_step'):
            if not getattr(self, name) > 0:
                raise AegisConfigError('radio.%s must be > 0, got %r.'
                                       % (name, getattr(self, name)))
        if self.jam_cost < 0:
            raise AegisConfigError('radio.jam_cost must be >= 0, got %r.' % self.jam_cost)
        if self.user_power > self.max_user_power:
            raise AegisConfigError('radio.user_power %r exceeds the radio limit %r.'
                                   % (self.user_power, self.max_user_power))
        for power, step in ((self.max_uav_power, self.uav_power_step),
                            (self.max_jam_power, self.jam_power_step)):
            if abs(power / step - round(power / step)) > 1e-9:
                raise AegisConfigError('Power step %r does not divide the maximum power %r.'
                                       % (step, power))
        return self


def _check_power(name, value):
    if not value >= 0:
        raise AegisDomainError('%s must be >= 0 mW, got %r.' % (name, value))


def ber_from_sinr(sinr):
    if not sinr >= 0:
        raise AegisDomainError('SINR must be >= 0, got %r.' % sinr)
    return 0.5 * numerics.erfc(math.sqrt(sinr))


def _path_amplitudes(P, x, y, h, sigma):
    direct = math.sqrt(P * h.h1 / (sigma + y * h.h3))
    hop1 = math.sqrt(P * h.h2 / (sigma + y * h.h4))
    hop2 = math.sqrt(x * h.h5 / sigma)
    return direct, hop1, hop2


def ber_vector(P, x, y, h, sigma):
    """ (rho1, rho2, rho3): BER at BS0, at the UAV, and on the UAV->BS1 hop. """
    _check_power('User power', P)
    _check_power('Relay power', x)
    _check_power('Jamming power', y)
    rho1 = ber_from_sinr(P * h.h1 / (sigma + y * h.h3))
    rho2 = ber_from_sinr(P * h.h2 / (sigma + y * h.h4))
    # a silent UAV conveys nothing on the second hop
    rho3 = ber_from_sinr(x * h.h5 / sigma) if x > 0 else 0.5
    return rho1, rho2, rho3


def message_ber(P, x, y, h, sigma):
    _check_power('User power', P)
    _check_power('Relay power', x)
    _check_power('Jamming power', y)
    direct, hop1, hop2 = _path_amplitudes(P, x, y, h, sigma)
    return 0.5 * numerics.erfc(max(direct, min(hop1, hop2)))


def uav_utility(P, x, y, h, sigma, relay_cost):
    return -message_ber(P, x, y, h, sigma) - x * relay_cost


def jammer_utility(u_uav, y, jam_cost):
    return -u_uav - y * jam_cost


def slot_energy(P, x, slot_duration):
    """ Energy in mJ spent by the user and the relaying UAV in one slot. """
    return (P + x) * slot_duration


def message_ber_grid(P, xs, ys, gains, sigma):
    """
    Message BER for every (x, y) pair; rows follow xs, columns follow ys.
    `gains` is a ChannelGains or a (n, 5) array of gain vectors, in which case the
    result is stacked along a leading ensemble axis.
    """
    xs = numpy.asarray(xs, dtype=float)[:, None]
    ys = numpy.asarray(ys, dtype=float)[None, :]
    h = numpy.atleast_2d(gains.as_array() if hasattr(gains, 'as_array') else gains)
    out = numpy.empty((h.shape[0], xs.shape[0], ys.shape[1]))
    for i, (h1, h2, h3, h4, h5) in enumerate(h):
        direct = numpy.sqrt(P * h1 / (sigma + ys * h3))
        hop1 = numpy.sqrt(P * h2 / (sigma + ys * h4))
        hop2 = numpy.sqrt(xs * h5 / sigma)
        out[i] = 0.5 * scipy.special.erfc(numpy.maximum(direct, numpy.minimum(hop1, hop2)))
    if hasattr(gains, 'as_array'):
        return out[0]
    return out


def simulate_qpsk_ber(stream, sinr, n_symbols):
    """
    Bit error rate of Gray-mapped QPSK over AWGN at bit-level SNR `sinr`, by
    direct simulation of n_symbols symbols (2 * n_symbols bits).
    """
    if not sinr > 0:
        raise AegisDomainError('Monte Carlo BER needs SINR > 0, got %r.' % sinr)
    bits = stream.integers(2, size=(n_symbols, 2))
    amplitude = 1.0 - 2.0 * bits
    noise_std = math.sqrt(1.0 / (2.0 * sinr))
    received = amplitude + noise_std * stream.normal(size=(n_symbols, 2))
    errors = numpy.count_nonzero((received < 0) != (bits == 1))
    return errors / float(2 * n_symbols)
