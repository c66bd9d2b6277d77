from __future__ import annotations
from dataclasses import dataclass, asdict
from typing import Optional
from ..exceptions import ConfigError


@dataclass(frozen=True)
class ThermalMaterial:
    rho: float  # kg/m3
    cp: float  # J/(kg K)
    lam: float  # W/(m K)
    mu: Optional[float] = None  # Pa s, coolant only

    def __post_init__(self):
        for name in ('rho', 'cp', 'lam'):
            value = getattr(self, name)
            if not value > 0.0:
                raise ConfigError(f'material {name} must be > 0, got {value}')
        if self.mu is not None and not self.mu > 0.0:
            raise ConfigError(f'material mu must be > 0, got {self.mu}')

    @property
    def volumetric_heat_capacity(self) -> float:
        return self.rho * self.cp

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_dict(cls, data: dict) -> ThermalMaterial:
        try:
            return cls(float(data['rho']), float(data['cp']),
                       float(data['lam']),
                       None if data.get('mu') is None else float(data['mu']))
        except KeyError as e:
            raise ConfigError(f'missing material property: {e}')


# Thermodynamic properties of the cooling plate, coolant and cell
ALUMINUM = ThermalMaterial(rho=2719.0, cp=871.0, lam=202.4)
WATER = ThermalMaterial(rho=998.2, cp=4128.0, lam=0.6, mu=1.003e-3)
BATTERY = ThermalMaterial(rho=2500.0, cp=100.0, lam=3.0)
