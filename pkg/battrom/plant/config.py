from __future__ import annotations
import dataclasses
import hashlib
import json
import os
from dataclasses import dataclass, field
from typing import Dict
from .material import ALUMINUM, BATTERY, WATER, ThermalMaterial
from ..exceptions import ConfigError

DEFAULT_PLANT_CONFIG = os.path.join(
    os.path.dirname(os.path.dirname(__file__)), 'data', 'plant_default.json')

SCHEMES = ('semi-implicit', 'explicit')


def _default_materials() -> Dict[str, ThermalMaterial]:
    return {'battery': BATTERY, 'aluminum': ALUMINUM, 'water': WATER}


@dataclass(frozen=True)
class PlantConfig:
    """Prismatic cell between two water cooled plates. With `symmetric`
    only half the cell thickness, one plate and that plate's share of the
    flow are modeled (insulated midplane)."""
    cell_length: float = 0.15  # m, along the flow
    cell_width: float = 0.10  # m
    cell_thickness: float = 0.01  # m
    plate_thickness: float = 0.003  # m
    channel_gap: float = 0.002  # m
    n_axial: int = 20
    n_stack: int = 4  # layers through half the cell thickness
    materials: Dict[str, ThermalMaterial] = field(
        default_factory=_default_materials)
    nusselt: float = 8.23
    initial_temperature: float = 300.0  # K
    flow_split: float = 0.5  # share of the total flow through each plate
    channels_per_plate: int = 1
    symmetric: bool = True
    adiabatic_cell: bool = False  # sever the cell to plate conduction
    variable_viscosity: bool = False  # affects Reynolds reporting only
    scheme: str = 'semi-implicit'

    def __post_init__(self):
        for name in ('cell_length', 'cell_width', 'cell_thickness',
                     'plate_thickness', 'channel_gap'):
            value = getattr(self, name)
            if not value > 0.0:
                raise ConfigError(f'{name} must be > 0, got {value}')
        if self.n_axial < 2:
            raise ConfigError(f'n_axial must be >= 2, got {self.n_axial}')
        if self.n_stack < 1:
            raise ConfigError(f'n_stack must be >= 1, got {self.n_stack}')
        if self.channels_per_plate < 1:
            raise ConfigError('channels_per_plate must be >= 1')
        if not self.nusselt >= 0.0:
            raise ConfigError(f'nusselt must be >= 0, got {self.nusselt}')
        if not self.initial_temperature > 0.0:
            raise ConfigError('initial_temperature must be > 0 K')
        if not 0.0 < self.flow_split <= 1.0:
            raise ConfigError('flow_split must be within (0, 1]')
        if self.scheme not in SCHEMES:
            raise ConfigError(f'unknown scheme: {self.scheme}')
        missing = {'battery', 'aluminum', 'water'} - set(self.materials)
        if missing:
            raise ConfigError(f'missing materials: {sorted(missing)}')
        if self.materials['water'].mu is None:
            raise ConfigError('water needs a viscosity (mu)')

    @property
    def battery(self) -> ThermalMaterial:
        return self.materials['battery']

    @property
    def aluminum(self) -> ThermalMaterial:
        return self.materials['aluminum']

    @property
    def water(self) -> ThermalMaterial:
        return self.materials['water']

    @property
    def cell_volume(self) -> float:
        return self.cell_length * self.cell_width * self.cell_thickness

    def replace(self, **changes) -> PlantConfig:
        return dataclasses.replace(self, **changes)

    def refined(self, factor: int) -> PlantConfig:
        return self.replace(n_axial=self.n_axial * factor,
                            n_stack=self.n_stack * factor)

    def to_dict(self) -> dict:
        data = {f.name: getattr(self, f.name)
                for f in dataclasses.fields(self)}
        data['materials'] = {
            k: m.to_dict() for k, m in sorted(self.materials.items())}
        return data

    @classmethod
    def from_dict(cls, data: dict) -> PlantConfig:
        data = dict(data)
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f'unknown plant config keys: {sorted(unknown)}')
        if 'materials' in data:
            materials = _default_materials()
            for k, m in data['materials'].items():
                materials[k] = ThermalMaterial.from_dict(m)
            data['materials'] = materials
        try:
            return cls(**data)
        except TypeError as e:
            raise ConfigError(f'invalid plant config: {e}')

    def config_hash(self) -> str:
        return config_hash(self.to_dict())


def config_hash(data: dict) -> str:
    canonical = json.dumps(data, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode()).hexdigest()


def load_plant_config(path: str = DEFAULT_PLANT_CONFIG) -> PlantConfig:
    with open(path, 'r') as fp:
        try:
            data = json.load(fp)
        except json.JSONDecodeError as e:
            raise ConfigError(f'{path}: {e}')
    return PlantConfig.from_dict(data)
