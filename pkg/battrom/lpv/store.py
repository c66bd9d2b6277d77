"""LPV grid files.

`.json` is a versioned text document; `.mpk` is the same document as a
msgpack body behind a fixed header (magic, version, checkbit, length).
"""
from __future__ import annotations
import json
import logging
import msgpack
import struct
from .build import GRID_FORMAT_VERSION
from .grid import AXES, LpvGrid
from ..exceptions import ConfigError, RomException
from ..units import kelvin_to_celsius

GRID_FORMAT = 'battrom-lpv-grid'


class GridPackage(object):

    __slots__ = ('version', 'length', 'body')

    st_package = struct.Struct('<4sHHI')
    magic = b'BLPV'

    def __init__(self, version: int = GRID_FORMAT_VERSION,
                 body: bytes = b''):
        self.version = version
        self.body = body
        self.length = len(body)

    @classmethod
    def make(cls, data: dict) -> GridPackage:
        return cls(GRID_FORMAT_VERSION, msgpack.packb(data))

    @classmethod
    def from_bytes(cls, barray: bytes) -> GridPackage:
        size = cls.st_package.size
        if len(barray) < size:
            raise ConfigError('grid package shorter than its header')
        magic, version, checkbit, length = \
            cls.st_package.unpack_from(barray, offset=0)
        if magic != cls.magic:
            raise ConfigError('not an LPV grid package')
        if version != checkbit ^ 0xffff:
            raise ConfigError('invalid checkbit')
        if len(barray) != size + length:
            raise ConfigError(
                f'grid package length {len(barray) - size} does not match '
                f'header ({length})')
        return cls(version, bytes(barray[size:]))

    def to_bytes(self) -> bytes:
        header = self.st_package.pack(
            self.magic,
            self.version,
            self.version ^ 0xffff,
            self.length)
        return header + self.body

    def read_data(self) -> dict:
        try:
            return msgpack.unpackb(self.body, strict_map_key=False)
        except Exception:
            logging.error(f'Failed to unpack grid package: {self!r}')
            raise

    def __repr__(self) -> str:
        return f'<version: {self.version} size: {self.length}>'


def grid_to_dict(grid: LpvGrid) -> dict:
    vertices = []
    for index in grid.indices():
        vertices.append({
            'index': list(index),
            'gains': grid.gains[index].tolist(),
            'taus': grid.taus[index].tolist(),
            'fit_rms': float(grid.fit_rms[index]),
        })
    return {
        'format': GRID_FORMAT,
        'version': GRID_FORMAT_VERSION,
        'axes': {
            'q_gen_W_m3': grid.q_axis.tolist(),
            'm_dot_kg_s': grid.m_axis.tolist(),
            't_in_C': [kelvin_to_celsius(t) for t in grid.t_axis.tolist()],
            # authoritative; the Celsius list is informative
            't_in_K': grid.t_axis.tolist(),
        },
        'metrics': dict(zip(AXES, grid.metrics)),
        't0_K': grid.t0_temperature,
        'order': grid.order,
        'extraction': grid.provenance,
        'vertices': vertices,
    }


def grid_from_dict(data: dict) -> LpvGrid:
    if data.get('format') != GRID_FORMAT:
        raise ConfigError(f'not an LPV grid document: {data.get("format")}')
    if data.get('version') != GRID_FORMAT_VERSION:
        raise ConfigError(
            f'unsupported grid version {data.get("version")}, expected '
            f'{GRID_FORMAT_VERSION}')
    try:
        axes = data['axes']
        q_axis = axes['q_gen_W_m3']
        m_axis = axes['m_dot_kg_s']
        t_axis = axes['t_in_K']
        order = int(data['order'])
        shape = (len(q_axis), len(m_axis), len(t_axis))
        gains = [[[None] * shape[2] for _ in range(shape[1])]
                 for _ in range(shape[0])]
        taus = [[[None] * shape[2] for _ in range(shape[1])]
                for _ in range(shape[0])]
        rms = [[[0.0] * shape[2] for _ in range(shape[1])]
               for _ in range(shape[0])]
        for vertex in data['vertices']:
            i, j, k = vertex['index']
            if len(vertex['gains']) != order:
                raise ConfigError(f'vertex {(i, j, k)} has order '
                                  f'{len(vertex["gains"])}, expected {order}')
            gains[i][j][k] = vertex['gains']
            taus[i][j][k] = vertex['taus']
            rms[i][j][k] = vertex.get('fit_rms', 0.0)
        missing = [(i, j, k) for i in range(shape[0])
                   for j in range(shape[1]) for k in range(shape[2])
                   if gains[i][j][k] is None]
        if missing:
            raise ConfigError(f'grid document misses vertices {missing}')
        metrics = tuple(data['metrics'][name] for name in AXES)
        return LpvGrid(q_axis, m_axis, t_axis, gains, taus,
                       float(data['t0_K']), rms, metrics,
                       dict(data.get('extraction', {})))
    except ConfigError:
        raise
    except RomException as e:
        raise ConfigError(f'invalid grid document: {e}')
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise ConfigError(f'invalid grid document: {e!r}')


def save_grid(grid: LpvGrid, path: str):
    data = grid_to_dict(grid)
    if path.endswith('.mpk'):
        with open(path, 'wb') as fp:
            fp.write(GridPackage.make(data).to_bytes())
    else:
        with open(path, 'w') as fp:
            json.dump(data, fp, indent=2)


def load_grid(path: str) -> LpvGrid:
    if path.endswith('.mpk'):
        with open(path, 'rb') as fp:
            data = GridPackage.from_bytes(fp.read()).read_data()
    else:
        try:
            with open(path, 'r') as fp:
                data = json.load(fp)
        except json.JSONDecodeError as e:
            raise ConfigError(f'{path}: {e}')
    return grid_from_dict(data)
