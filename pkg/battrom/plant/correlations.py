"""Laminar parallel-plate channel correlations. The coolant film
coefficient follows the fully developed constant-Nusselt law and does not
depend on the flow rate; the flow rate enters the plant through advection."""
from .config import PlantConfig
from ..exceptions import DomainError

# Vogel fit for water viscosity, mu = A * 10 ** (B / (T - C)), T in K
_VOGEL_A = 2.414e-5
_VOGEL_B = 247.8
_VOGEL_C = 140.0


def _check_flow(m_dot: float):
    if not m_dot >= 0.0:
        raise DomainError(f'm_dot must be >= 0, got {m_dot}')


def hydraulic_diameter(config: PlantConfig) -> float:
    # wide channel limit of a parallel-plate duct
    return 2.0 * config.channel_gap


def channel_area(config: PlantConfig) -> float:
    return config.channel_gap * config.cell_width / config.channels_per_plate


def h_conv(config: PlantConfig, m_dot: float = 0.0,
           coolant_temperature: float = 300.0) -> float:
    """Returns the film coefficient in W/(m2 K)."""
    _check_flow(m_dot)
    return config.nusselt * config.water.lam / hydraulic_diameter(config)


def water_viscosity(config: PlantConfig, temperature: float) -> float:
    if not config.variable_viscosity:
        return config.water.mu
    if not temperature > _VOGEL_C:
        raise DomainError(
            f'viscosity correlation undefined at {temperature} K')
    return _VOGEL_A * 10.0 ** (_VOGEL_B / (temperature - _VOGEL_C))


def reynolds(config: PlantConfig, m_dot: float,
             coolant_temperature: float = 300.0) -> float:
    _check_flow(m_dot)
    m_channel = m_dot * config.flow_split / config.channels_per_plate
    mu = water_viscosity(config, coolant_temperature)
    return m_channel * hydraulic_diameter(config) / (
        channel_area(config) * mu)
