"""Small numpy based CSV helpers shared by trajectories, profiles and step
responses. Files are plain `name,name,...` tables, optionally preceded by
`#` comment lines."""
import numpy as np
from typing import Dict, List, Sequence, Tuple
from .exceptions import ConfigError


def write_table(path: str, names: Sequence[str],
                columns: Sequence[np.ndarray],
                comments: Sequence[str] = ()):
    data = np.column_stack([np.asarray(c, dtype=float) for c in columns])
    header = '\n'.join([f'# {c}' for c in comments] + [','.join(names)])
    np.savetxt(path, data, delimiter=',', header=header, comments='',
               fmt='%.17g')


def read_table(path: str) -> Tuple[Dict[str, np.ndarray], List[str]]:
    comments = []
    with open(path, 'r') as fp:
        for line in fp:
            if line.startswith('#'):
                comments.append(line[1:].strip())
                continue
            names = [n.strip() for n in line.strip().split(',')]
            break
        else:
            raise ConfigError(f'no header found in {path}')

    data = np.loadtxt(path, delimiter=',', skiprows=len(comments) + 1,
                      ndmin=2)
    if data.size and data.shape[1] != len(names):
        raise ConfigError(
            f'{path}: header has {len(names)} columns, '
            f'data has {data.shape[1]}')
    if not data.size:
        data = np.zeros((0, len(names)))
    return {n: data[:, i] for i, n in enumerate(names)}, comments
