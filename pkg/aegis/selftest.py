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
Built-in numerical checks run by the `selftest` command: erfc against
quadrature, CNN gradients against central differences, the closed-form QPSK
BER against simulation, and the stage-game solver against known equilibria.
"""

import logging
import math
from dataclasses import dataclass

import numpy
import scipy.integrate

import aegis.settings as S
from aegis import analysis, nn, numerics, phy
from aegis.channel import ChannelGains

logger = logging.getLogger(__name__)

SEED = 20240917

# Direct link at unit SNR; the relay and jammer links are too weak to matter.
WEAK_GAINS = ChannelGains(h1=0.02, h2=0.02, h3=1e-6, h4=1e-6, h5=1e-4)
WEAK_RADIO = phy.RadioConfig(relay_cost=0.001, jam_cost=0.001)
# Good UAV->BS1 hop: full-power relaying against full-power jamming.
SMART_GAINS = ChannelGains(h1=0.01, h2=0.2, h3=0.05, h4=0.1, h5=0.0072)
SMART_RADIO = phy.RadioConfig(relay_cost=0.0001, jam_cost=0.0)


@dataclass
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ''


def _erfc_density(t):
    return 2.0 / math.sqrt(math.pi) * math.exp(-t * t)


def erfc_quadrature(x):
    tail, _ = scipy.integrate.quad(_erfc_density, abs(x), numpy.inf, epsabs=1e-14, epsrel=1e-13)
    return tail if x >= 0 else 2.0 - tail


def check_erfc(points=S.selftest.erfc_points, tolerance=S.selftest.erfc_tolerance):
    xs = numpy.linspace(-6.0, 6.0, points)
    worst = max(abs(numerics.erfc(x) - erfc_quadrature(x)) for x in xs)
    return Check('erfc vs quadrature', worst, tolerance, worst < tolerance,
                 '%d points in [-6, 6]' % points)


def gradient_batch(arch, stream, n_inputs):
    inputs = stream.generator.random((n_inputs, arch.n1, arch.n1))
    actions = stream.integers(arch.r2, size=n_inputs)
    targets = stream.normal(size=n_inputs)
    return [(inputs[i], int(actions[i]), float(targets[i])) for i in range(n_inputs)]


def faulty_gradients(offset=1e-2):
    """ loss_and_gradients with conv1_b[0] of the gradient shifted by offset. """
    def gradient_fn(arch, weights, batch):
        loss, grads = nn.loss_and_gradients(arch, weights, batch)
        grads.conv1_b = grads.conv1_b.copy()
        grads.conv1_b[0] += offset
        return loss, grads
    return gradient_fn


def check_gradients(params=S.selftest.gradient_params, inputs=S.selftest.gradient_inputs,
                    tolerance=S.selftest.gradient_tolerance, gradient_fn=None, seed=SEED):
    stream = numerics.RandomStream(seed).split('gradient-check')
    arch = nn.CnnArchitecture()
    weights = nn.init_weights(arch, stream.split('weights'))
    batch = gradient_batch(arch, stream.split('batch'), inputs)
    result = nn.gradient_check(arch, weights, batch, params, stream.split('params'),
                               tolerance=tolerance, gradient_fn=gradient_fn)
    worst = max(result.samples, key=lambda s: s[-1])
    return Check('CNN gradients vs central differences', result.max_rel_error, tolerance,
                 result.passed, 'worst at %s[%d]' % (worst[0], worst[1]))


def check_qpsk(grid=S.selftest.qpsk_grid, symbols=S.selftest.qpsk_symbols, seed=SEED):
    stream = numerics.RandomStream(seed).split('qpsk')
    worst_sigmas = 0.0
    for sinr in grid:
        p = phy.ber_from_sinr(sinr)
        measured = phy.simulate_qpsk_ber(stream.split('%r' % sinr), sinr, symbols)
        se = math.sqrt(p * (1 - p) / (2.0 * symbols))
        worst_sigmas = max(worst_sigmas, abs(measured - p) / se)
    return Check('QPSK BER vs Monte Carlo (binomial sigmas)', worst_sigmas, 3.0,
                 worst_sigmas <= 3.0, '%d SINRs x %d symbols' % (len(grid), symbols))


def check_stage_games():
    weak = analysis.solve_stage_game(analysis.StageGame.fixed(WEAK_GAINS, WEAK_RADIO))
    weak_ok = [(e.x, e.y) for e in weak] == [(0.0, 0.0)]
    expected = -analysis.ne_ber_weak(WEAK_RADIO.user_power, WEAK_GAINS.h1,
                                     WEAK_RADIO.noise_power)
    error = abs(weak[0].u_uav - expected) if weak_ok else float('inf')
    smart = analysis.solve_stage_game(analysis.StageGame.fixed(SMART_GAINS, SMART_RADIO))
    smart_ok = (SMART_RADIO.max_uav_power, SMART_RADIO.max_jam_power) in [(e.x, e.y)
                                                                          for e in smart]
    passed = weak_ok and smart_ok and error < 1e-12
    return Check('stage-game equilibria', error, 1e-12, passed,
                 'weak NE %s, smart NE includes (150, 80): %s'
                 % ([(e.x, e.y) for e in weak], smart_ok))


def run_selftest(gradient_fn=None, qpsk_symbols=S.selftest.qpsk_symbols):
    checks = [check_erfc(), check_gradients(gradient_fn=gradient_fn),
              check_qpsk(symbols=qpsk_symbols), check_stage_games()]
    for check in checks:
        logger.info('%s: %s (measured %.3g, tolerance %.3g)', check.name,
                    'ok' if check.passed else 'FAILED', check.measured, check.tolerance)
    return checks
