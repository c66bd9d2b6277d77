from __future__ import annotations
import math
import numpy as np
from typing import Iterable, Optional, Tuple
from .csvio import read_table, write_table
from .exceptions import DomainError
from .units import celsius_to_kelvin, kelvin_to_celsius

# breakpoints are matched within this tolerance (seconds)
_T_EPS = 1e-9


class SchedulePoint:
    __slots__ = ('q_gen', 'm_dot', 't_in')

    q_gen: float  # W/m3
    m_dot: float  # kg/s, total over both plates
    t_in: float  # K

    def __init__(self, q_gen: float, m_dot: float, t_in: float):
        if not math.isfinite(q_gen):
            raise DomainError(f'q_gen must be finite, got {q_gen}')
        if not (m_dot >= 0.0 and math.isfinite(m_dot)):
            raise DomainError(f'm_dot must be >= 0, got {m_dot}')
        if not (t_in > 0.0 and math.isfinite(t_in)):
            raise DomainError(f't_in must be > 0 K, got {t_in}')
        self.q_gen = float(q_gen)
        self.m_dot = float(m_dot)
        self.t_in = float(t_in)

    @classmethod
    def from_celsius(cls, q_gen: float, m_dot: float,
                     t_in_c: float) -> SchedulePoint:
        return cls(q_gen, m_dot, celsius_to_kelvin(t_in_c))

    @property
    def t_in_c(self) -> float:
        return kelvin_to_celsius(self.t_in)

    def with_q(self, q_gen: float) -> SchedulePoint:
        return SchedulePoint(q_gen, self.m_dot, self.t_in)

    def to_dict(self) -> dict:
        return {'q_gen': self.q_gen, 'm_dot': self.m_dot, 't_in': self.t_in}

    @classmethod
    def from_dict(cls, data: dict) -> SchedulePoint:
        return cls(data['q_gen'], data['m_dot'], data['t_in'])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SchedulePoint):
            return NotImplemented
        return (self.q_gen, self.m_dot, self.t_in) == \
            (other.q_gen, other.m_dot, other.t_in)

    def __hash__(self) -> int:
        return hash((self.q_gen, self.m_dot, self.t_in))

    def __repr__(self) -> str:
        return (f'q_gen: {self.q_gen:g} W/m3 m_dot: {self.m_dot:g} kg/s '
                f't_in: {self.t_in_c:g} C')


class Profile:
    """Piecewise-constant signal; the value of a point holds until the next
    point (zero-order hold) and the last value holds forever."""

    __slots__ = ('times', 'values')

    def __init__(self, times: Iterable[float], values: Iterable[float]):
        times = np.asarray(list(times), dtype=float)
        values = np.asarray(list(values), dtype=float)
        if times.ndim != 1 or times.shape != values.shape or not times.size:
            raise DomainError('profile needs matching, non-empty time and '
                              'value arrays')
        if times[0] != 0.0:
            raise DomainError(f'profile must start at t=0, got {times[0]}')
        if np.any(np.diff(times) <= 0.0):
            raise DomainError('profile times must be strictly increasing')
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
            raise DomainError('profile contains non-finite values')
        self.times = times
        self.values = values

    @classmethod
    def constant(cls, value: float) -> Profile:
        return cls([0.0], [value])

    @classmethod
    def from_points(cls, points: Iterable[Tuple[float, float]]) -> Profile:
        points = list(points)
        return cls([p[0] for p in points], [p[1] for p in points])

    def __len__(self) -> int:
        return self.times.size

    def value_at(self, t: float) -> float:
        idx = np.searchsorted(self.times, t + _T_EPS, side='right') - 1
        return float(self.values[max(idx, 0)])

    def sample(self, times: np.ndarray) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        idx = np.searchsorted(self.times, times + _T_EPS, side='right') - 1
        return self.values[np.clip(idx, 0, None)]

    def durations(self, t_end: float) -> np.ndarray:
        edges = np.append(self.times, max(t_end, self.times[-1]))
        return np.clip(np.minimum(edges[1:], t_end) - self.times, 0.0, None)

    def moments(self, t_end: float) -> Tuple[float, float]:
        """Returns the time-weighted mean and population standard deviation
        over [0, t_end]."""
        if t_end <= 0.0:
            raise DomainError(f't_end must be > 0, got {t_end}')
        w = self.durations(t_end)
        mean = float(np.sum(w * self.values) / t_end)
        var = float(np.sum(w * (self.values - mean) ** 2) / t_end)
        return mean, math.sqrt(max(var, 0.0))

    def map(self, fn) -> Profile:
        return Profile(self.times, fn(self.values))

    def to_csv(self, path: str, value_name: str = 'value'):
        write_table(path, ('t_s', value_name), (self.times, self.values))

    @classmethod
    def read_csv(cls, path: str) -> Profile:
        table, _ = read_table(path)
        names = list(table)
        if len(names) != 2 or names[0] != 't_s':
            raise DomainError(
                f'{path}: expected a `t_s,<value>` profile, got {names}')
        return cls(table['t_s'], table[names[1]])


class Profiles:
    """Drive signals for a thermal run; t_in is in kelvin."""

    __slots__ = ('q_gen', 'm_dot', 't_in')

    def __init__(self, q_gen: Profile, m_dot: Profile, t_in: Profile):
        if np.any(m_dot.values < 0.0):
            raise DomainError('m_dot profile must be >= 0')
        if np.any(t_in.values <= 0.0):
            raise DomainError('t_in profile must be > 0 K')
        self.q_gen = q_gen
        self.m_dot = m_dot
        self.t_in = t_in

    @classmethod
    def constant(cls, p: SchedulePoint) -> Profiles:
        return cls(Profile.constant(p.q_gen), Profile.constant(p.m_dot),
                   Profile.constant(p.t_in))

    @classmethod
    def from_heat(cls, q_gen: Profile, m_dot: float, t_in: float,
                  m_dot_profile: Optional[Profile] = None) -> Profiles:
        return cls(q_gen, m_dot_profile or Profile.constant(m_dot),
                   Profile.constant(t_in))

    def point_at(self, t: float) -> SchedulePoint:
        return SchedulePoint(self.q_gen.value_at(t), self.m_dot.value_at(t),
                             self.t_in.value_at(t))


def time_base(t_end: float, dt: float) -> np.ndarray:
    if not dt > 0.0:
        raise DomainError(f'dt must be > 0, got {dt}')
    if not t_end > 0.0:
        raise DomainError(f't_end must be > 0, got {t_end}')
    n = int(round(t_end / dt))
    if n < 1:
        raise DomainError(f't_end ({t_end}) shorter than dt ({dt})')
    return np.arange(n + 1) * dt
