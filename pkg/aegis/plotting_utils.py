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

import matplotlib
matplotlib.use('Agg')

import matplotlib.pyplot as plt
import numpy


def median_curve(summaries, series):
    """ Slot-wise median of one RunSummary series over seeds. """
    curves = [getattr(s, series) for s in summaries]
    if not curves or not len(curves[0]):
        return numpy.zeros(0)
    return numpy.median(numpy.vstack(curves), axis=0)


def plot_curves(curves_by_agent, filename, ylabel, title=None, reference=None, logy=False):
    """
    One line per agent of a {agent: per-slot values} mapping, written to
    filename. `reference` draws a horizontal line, e.g. the equilibrium BER.
    """
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for agent, values in curves_by_agent.items():
        values = numpy.asarray(values, dtype=float)
        ax.plot(numpy.arange(1, len(values) + 1), values, label=agent)
    if reference is not None:
        ax.axhline(reference, color='k', linestyle='--', linewidth=0.8, label='equilibrium')
    if logy:
        ax.set_yscale('log')
    ax.set_xlabel('time slot')
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.legend(loc='best')
    fig.tight_layout()
    fig.savefig(filename)
    plt.close(fig)
    return filename


def plot_learning_curves(summaries_by_agent, prefix, ne_ber=None):
    """ Median MA-BER and cumulative energy per agent, as <prefix>-ber.png and <prefix>-energy.png. """
    ber = {a: median_curve(s, 'ma_ber') for a, s in summaries_by_agent.items()}
    energy = {a: median_curve(s, 'cumulative_energy') for a, s in summaries_by_agent.items()}
    return [plot_curves(ber, prefix + '-ber.png', 'BER of the user message', reference=ne_ber,
                        logy=True),
            plot_curves(energy, prefix + '-energy.png', 'cumulative energy (mJ)')]
