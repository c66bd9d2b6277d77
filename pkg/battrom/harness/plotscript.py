import os
from typing import Sequence

PLOT_SCRIPT = 'plot_results.py'

_TEMPLATE = '''\
"""Plots the average cell temperature of every case in this directory.

Usage: python {script} [output.png]
"""
import os
import sys
import numpy as np
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))
CASES = {cases!r}


def main():
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for case in CASES:
        data = np.genfromtxt(os.path.join(HERE, case + '.csv'),
                             delimiter=',', names=True, comments='#')
        ax.plot(data['t_s'], data['T_avg_K'] - 273.15, label=case)
    ax.set_xlabel('time (s)')
    ax.set_ylabel('average cell temperature (C)')
    ax.set_title({title!r})
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    if len(sys.argv) > 1:
        fig.savefig(sys.argv[1], dpi=150)
    else:
        plt.show()


if __name__ == '__main__':
    main()
'''


def write_plot_script(out_dir: str, case_names: Sequence[str],
                      title: str = '') -> str:
    """Writes a standalone matplotlib script next to the case CSVs and
    returns its path."""
    path = os.path.join(out_dir, PLOT_SCRIPT)
    with open(path, 'w') as fp:
        fp.write(_TEMPLATE.format(
            script=PLOT_SCRIPT, cases=list(case_names), title=title))
    return path
