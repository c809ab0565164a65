#!/usr/bin/env python3

"""
Plot the CSV files written by ``bicrates gauss figure N --out DIR``.

Usage: python docs/plot_curves.py DIR [OUTPUT.png]
"""

import math
import sys
from pathlib import Path

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np

golden_ratio = (math.sqrt(5) - 1.0) / 2.0
plt.rcParams['font.size'] = 9
plt.rcParams['figure.figsize'] = [6.0, 6.0 * golden_ratio]


def read_csv(path):
    """Header names and a float array, skipping ``#`` lines."""
    lines = [line for line in Path(path).read_text().splitlines() if line and not line.startswith('#')]
    header = lines[0].split(',')
    return header, np.array([[float(v) for v in line.split(',')] for line in lines[1:]])


def plot_slices(files, ax):
    for path in files:
        _, data = read_csv(path)
        beta = path.stem.split('beta', 1)[1]
        line, = ax.plot(data[:, 1], data[:, 2], label=f'inner, beta={beta}')
        ax.plot(data[:, 1], data[:, 3], '--', color=line.get_color(), label=f'outer, beta={beta}')
    ax.set_xlabel('R1 [bits]')
    ax.set_ylabel('R2 [bits]')


def plot_sweep(path, ax):
    header, data = read_csv(path)
    for j, name in enumerate(header[1:], 1):
        ax.plot(data[:, 0], data[:, j], label=name)
    ax.set_xlabel('a')
    ax.set_ylabel('sum rate [bits]')


def main(argv):
    if not argv:
        print(__doc__.strip())
        return 2
    src = Path(argv[0])
    target = Path(argv[1]) if len(argv) > 1 else src / 'curves.png'
    fig, ax = plt.subplots()
    sweeps = sorted(src.glob('fig*_sumrate.csv'))
    if sweeps:
        plot_sweep(sweeps[0], ax)
    else:
        plot_slices(sorted(src.glob('fig*_beta*.csv')), ax)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(target, dpi=150)
    print(target)
    return 0


if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
