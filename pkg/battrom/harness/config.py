from __future__ import annotations
import dataclasses
import json
import os
from dataclasses import dataclass, field
from typing import Optional, Tuple
from ..exceptions import ConfigError
from ..plant import PlantConfig, config_hash
from ..schedule import Profile
from ..units import celsius_to_kelvin

DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'data')
VALIDATION_HEAT_PROFILE = os.path.join(DATA_DIR, 'validation_heat.csv')
FLOW_HEAT_PROFILE = os.path.join(DATA_DIR, 'flow_heat.csv')
COUPLED_CURRENT_PROFILE = os.path.join(DATA_DIR, 'coupled_current.csv')

# step-response extraction levels, W/m3
VALIDATION_Q_AXIS = (8e4, 1e5, 5e5, 1e6, 5e6, 1e7, 5e7)

# three-parameter grid: W/m3, kg/s, C
FLOW_Q_AXIS = (1e5, 5e5, 5e6)
FLOW_M_AXIS = (2e-4, 5e-4, 1e-3, 2e-3, 3e-3)
FLOW_T_IN_AXIS = (5.0, 10.0, 15.0, 20.0)

# flow rate coefficients of variation of the four flow cases, %
FLOW_CASE_COVS = (0.0, 2.8, 8.4, 14.0)


@dataclass(frozen=True)
class StudyConfig:
    plant: PlantConfig = field(default_factory=PlantConfig)
    dt: float = 0.5  # s
    order: int = 4
    seed: int = 0
    workers: Optional[int] = None
    tie_modes: bool = True
    # normalized gains are affine in 1/q_gen
    q_metric: str = 'reciprocal'

    # validation scenario (LTI failure and LPV validation)
    heat_profile: str = VALIDATION_HEAT_PROFILE
    t_end: float = 1800.0  # s
    m_dot: float = 2e-3  # kg/s
    t_in: float = 5.0  # C
    q_axis: Tuple[float, ...] = VALIDATION_Q_AXIS
    extraction_t_end: float = 3000.0  # s
    early_window: float = 200.0  # s
    tolerance_pct: float = 4.0

    # flow study
    flow_heat_profile: str = FLOW_HEAT_PROFILE
    flow_t_end: float = 3600.0  # s
    flow_mean: float = 8e-4  # kg/s
    flow_t_in: float = 20.0  # C
    flow_covs: Tuple[float, ...] = FLOW_CASE_COVS
    flow_q_axis: Tuple[float, ...] = FLOW_Q_AXIS
    flow_m_axis: Tuple[float, ...] = FLOW_M_AXIS
    flow_t_axis: Tuple[float, ...] = FLOW_T_IN_AXIS  # C
    flow_extraction_t_end: float = 6000.0  # s
    warmup: float = 600.0  # s

    # ECM coupled run
    ecm_params: Optional[str] = None  # default parameter set when None
    current_profile: str = COUPLED_CURRENT_PROFILE
    coupled_t_end: float = 1800.0  # s
    coupled_m_dot: float = 2e-3  # kg/s
    coupled_t_in: float = 26.85  # C
    initial_soc: float = 1.0
    exchange_every: int = 1  # thermal steps per ECM temperature update

    def __post_init__(self):
        for name in ('dt', 't_end', 'flow_t_end', 'coupled_t_end',
                     'extraction_t_end', 'flow_extraction_t_end',
                     'm_dot', 'flow_mean', 'coupled_m_dot',
                     'early_window', 'tolerance_pct'):
            value = getattr(self, name)
            if not value > 0.0:
                raise ConfigError(f'{name} must be > 0, got {value}')
        if self.order < 1:
            raise ConfigError(f'order must be >= 1, got {self.order}')
        if self.exchange_every < 1:
            raise ConfigError('exchange_every must be >= 1')
        if not 0.0 <= self.initial_soc <= 1.0:
            raise ConfigError('initial_soc must be within [0, 1]')
        if self.warmup < 0.0 or self.warmup >= self.flow_t_end:
            raise ConfigError('warmup must be within [0, flow_t_end)')
        if self.q_metric not in ('linear', 'log', 'reciprocal'):
            raise ConfigError(f'unknown q_metric: {self.q_metric}')
        for name in ('q_axis', 'flow_q_axis', 'flow_m_axis', 'flow_t_axis',
                     'flow_covs'):
            object.__setattr__(
                self, name, tuple(float(v) for v in getattr(self, name)))
            if not getattr(self, name):
                raise ConfigError(f'{name} must not be empty')

    @property
    def metrics(self) -> Tuple[str, str, str]:
        return self.q_metric, 'linear', 'linear'

    @property
    def t_in_k(self) -> float:
        return celsius_to_kelvin(self.t_in)

    @property
    def flow_t_in_k(self) -> float:
        return celsius_to_kelvin(self.flow_t_in)

    @property
    def coupled_t_in_k(self) -> float:
        return celsius_to_kelvin(self.coupled_t_in)

    def validation_heat(self) -> Profile:
        return Profile.read_csv(self.heat_profile)

    def flow_heat(self) -> Profile:
        return Profile.read_csv(self.flow_heat_profile)

    def coupled_current(self) -> Profile:
        return Profile.read_csv(self.current_profile)

    def replace(self, **changes) -> StudyConfig:
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        data = {f.name: getattr(self, f.name)
                for f in dataclasses.fields(self)}
        data['plant'] = self.plant.to_dict()
        for name in ('q_axis', 'flow_q_axis', 'flow_m_axis', 'flow_t_axis',
                     'flow_covs'):
            data[name] = list(data[name])
        return data

    @classmethod
    def from_dict(cls, data: dict) -> StudyConfig:
        data = dict(data)
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f'unknown study config keys: {sorted(unknown)}')
        if 'plant' in data:
            data['plant'] = PlantConfig.from_dict(data['plant'])
        try:
            return cls(**data)
        except TypeError as e:
            raise ConfigError(f'invalid study config: {e}')

    def config_hash(self) -> str:
        """Hash of the inputs; data file paths are hashed by content."""
        data = self.to_dict()
        for name in ('heat_profile', 'flow_heat_profile', 'current_profile',
                     'ecm_params'):
            data[name] = _file_digest(data[name])
        data.pop('workers')
        return config_hash(data)


def _file_digest(path: Optional[str]) -> Optional[str]:
    if path is None:
        return None
    try:
        with open(path, 'r') as fp:
            return config_hash({'content': fp.read()})
    except OSError:
        return None


def load_study_config(path: Optional[str] = None) -> StudyConfig:
    if path is None:
        return StudyConfig()
    with open(path, 'r') as fp:
        try:
            data = json.load(fp)
        except json.JSONDecodeError as e:
            raise ConfigError(f'{path}: {e}')
    base = os.path.dirname(os.path.abspath(path))
    for name in ('heat_profile', 'flow_heat_profile', 'current_profile',
                 'ecm_params'):
        value = data.get(name)
        if isinstance(value, str) and not os.path.isabs(value):
            data[name] = os.path.join(base, value)
    return StudyConfig.from_dict(data)
