from __future__ import annotations
import json
import os
import numpy as np
from dataclasses import dataclass
from .tables import Table1D, Table2D
from ..exceptions import ConfigError

DEFAULT_ECM_PARAMS = os.path.join(
    os.path.dirname(os.path.dirname(__file__)), 'data', 'ecm_default.json')


@dataclass(frozen=True)
class EcmParams:
    capacity: float  # A.h
    cell_volume: float  # m3
    ocv_table: Table1D
    r0_table: Table2D
    r1_table: Table2D
    c1_table: Table2D
    entropy_table: Table1D

    def __post_init__(self):
        if not self.capacity > 0.0:
            raise ConfigError(f'capacity must be > 0, got {self.capacity}')
        if not self.cell_volume > 0.0:
            raise ConfigError(
                f'cell_volume must be > 0, got {self.cell_volume}')
        if np.any(np.diff(self.ocv_table.y) < 0.0):
            raise ConfigError('ocv table must be nondecreasing in SOC')
        for name in ('ocv_table', 'entropy_table'):
            table: Table1D = getattr(self, name)
            if table.x[0] > 0.0 or table.x[-1] < 1.0:
                raise ConfigError(f'{name} must cover SOC 0..1')
        for name in ('r0_table', 'r1_table', 'c1_table'):
            table: Table2D = getattr(self, name)
            if table.min() <= 0.0:
                raise ConfigError(f'{name} values must be > 0')
            if table.soc[0] > 0.0 or table.soc[-1] < 1.0:
                raise ConfigError(f'{name} must cover SOC 0..1')

    @classmethod
    def from_dict(cls, data: dict) -> EcmParams:
        try:
            return cls(
                capacity=float(data['capacity_ah']),
                cell_volume=float(data['cell_volume_m3']),
                ocv_table=Table1D.from_pairs(data['ocv']),
                r0_table=Table2D.from_triples(data['r0']),
                r1_table=Table2D.from_triples(data['r1']),
                c1_table=Table2D.from_triples(data['c1']),
                entropy_table=Table1D.from_pairs(data['entropy']))
        except KeyError as e:
            raise ConfigError(f'missing ECM parameter field: {e}')
        except (TypeError, ValueError) as e:
            raise ConfigError(f'invalid ECM parameter file: {e}')

    def to_dict(self) -> dict:
        return {
            'capacity_ah': self.capacity,
            'cell_volume_m3': self.cell_volume,
            'ocv': self.ocv_table.to_pairs(),
            'entropy': self.entropy_table.to_pairs(),
            'r0': self.r0_table.to_triples(),
            'r1': self.r1_table.to_triples(),
            'c1': self.c1_table.to_triples(),
        }


def load_ecm_params(path: str = DEFAULT_ECM_PARAMS) -> EcmParams:
    with open(path, 'r') as fp:
        try:
            data = json.load(fp)
        except json.JSONDecodeError as e:
            raise ConfigError(f'{path}: {e}')
    return EcmParams.from_dict(data)
