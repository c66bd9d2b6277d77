from __future__ import annotations
import numpy as np
from dataclasses import dataclass, field
from functools import cached_property
from scipy.interpolate import RegularGridInterpolator
from typing import Dict, NamedTuple, Sequence, Tuple
from ..exceptions import DomainError
from ..rom.foster import FosterLtiModel
from ..schedule import SchedulePoint

METRICS = ('linear', 'log', 'reciprocal')

# q_gen, m_dot, t_in
DEFAULT_METRICS = ('log', 'linear', 'linear')
AXES = ('q_gen', 'm_dot', 't_in')


def to_metric(values, metric: str):
    """Maps axis values to the coordinate in which interpolation weights
    are linear (kept increasing)."""
    values = np.asarray(values, dtype=float)
    if metric == 'linear':
        return values
    if metric == 'log':
        return np.log(values)
    if metric == 'reciprocal':
        return -1.0 / values
    raise DomainError(f'unknown axis metric: {metric}')


class ScheduledParams(NamedTuple):
    gains: np.ndarray
    taus: np.ndarray
    clamped: bool


@dataclass(frozen=True, eq=False)
class LpvGrid:
    q_axis: np.ndarray  # W/m3
    m_axis: np.ndarray  # kg/s
    t_axis: np.ndarray  # K
    gains: np.ndarray  # nq x nm x nt x order, K m3/W
    taus: np.ndarray  # nq x nm x nt x order, s
    t0_temperature: float  # K
    fit_rms: np.ndarray = None  # nq x nm x nt
    metrics: Tuple[str, str, str] = DEFAULT_METRICS
    provenance: Dict = field(default_factory=dict)

    def __post_init__(self):
        axes = [np.array(a, dtype=float) for a in self.axes]
        for name, axis in zip(AXES, axes):
            if axis.ndim != 1 or axis.size < 1:
                raise DomainError(f'{name} axis must be non-empty')
            if np.any(np.diff(axis) <= 0.0):
                raise DomainError(f'{name} axis must be strictly increasing')
        for name, axis, metric in zip(AXES, axes, self.metrics):
            if metric not in METRICS:
                raise DomainError(f'unknown axis metric: {metric}')
            if metric != 'linear' and np.any(axis <= 0.0):
                raise DomainError(
                    f'{name} axis must be positive for a {metric} metric')
        shape = tuple(a.size for a in axes)
        gains = np.array(self.gains, dtype=float)
        taus = np.array(self.taus, dtype=float)
        if gains.ndim != 4 or gains.shape[:3] != shape or \
                taus.shape != gains.shape or gains.shape[3] < 1:
            raise DomainError(
                f'vertex tensor {gains.shape} does not match axes {shape}')
        if not (np.all(np.isfinite(gains)) and np.all(np.isfinite(taus))):
            raise DomainError('grid parameters must be finite')
        if np.any(taus <= 0.0) or np.any(np.diff(taus, axis=-1) >= 0.0):
            raise DomainError(
                'vertex time constants must be > 0 and sorted descending')
        rms = np.zeros(shape) if self.fit_rms is None else \
            np.array(self.fit_rms, dtype=float).reshape(shape)
        for name, value in zip(('q_axis', 'm_axis', 't_axis'), axes):
            object.__setattr__(self, name, value)
        object.__setattr__(self, 'gains', gains)
        object.__setattr__(self, 'taus', taus)
        object.__setattr__(self, 'fit_rms', rms)
        object.__setattr__(self, 'metrics', tuple(self.metrics))

    @property
    def axes(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.q_axis, self.m_axis, self.t_axis

    @property
    def shape(self) -> Tuple[int, int, int]:
        return self.gains.shape[:3]

    @property
    def order(self) -> int:
        return self.gains.shape[3]

    @property
    def n_vertices(self) -> int:
        return int(np.prod(self.shape))

    def vertex_point(self, index: Tuple[int, int, int]) -> SchedulePoint:
        i, j, k = index
        return SchedulePoint(
            self.q_axis[i], self.m_axis[j], self.t_axis[k])

    def vertex(self, index: Tuple[int, int, int]) -> FosterLtiModel:
        return FosterLtiModel(
            self.gains[index], self.taus[index], self.vertex_point(index),
            self.t0_temperature, float(self.fit_rms[index]))

    def indices(self):
        return np.ndindex(*self.shape)

    @classmethod
    def from_models(cls, q_axis: Sequence[float], m_axis: Sequence[float],
                    t_axis: Sequence[float], models: np.ndarray,
                    metrics: Tuple[str, str, str] = DEFAULT_METRICS,
                    provenance: Dict = None) -> LpvGrid:
        """models: object array (nq, nm, nt) of FosterLtiModel with
        identical order and extraction start temperature."""
        models = np.asarray(models, dtype=object)
        orders = {m.order for m in models.flat}
        if len(orders) != 1:
            raise DomainError(f'vertex orders differ: {sorted(orders)}')
        t0s = {m.t0_temperature for m in models.flat}
        if len(t0s) != 1:
            raise DomainError('vertices have different start temperatures')
        shape = models.shape + (orders.pop(),)
        gains = np.empty(shape)
        taus = np.empty(shape)
        rms = np.empty(models.shape)
        for index in np.ndindex(*models.shape):
            gains[index] = models[index].gains
            taus[index] = models[index].taus
            rms[index] = models[index].fit_rms
        return cls(q_axis, m_axis, t_axis, gains, taus, t0s.pop(), rms,
                   metrics, provenance or {})

    @cached_property
    def interpolator(self) -> ParamInterpolator:
        return ParamInterpolator(self)


class ParamInterpolator:
    """Multilinear interpolation of (gains, log taus) over the enclosing
    vertices. Singleton axes drop out; coordinates outside the hull are
    clamped to it."""

    def __init__(self, grid: LpvGrid):
        self.order = grid.order
        self.axes = grid.axes
        self.metrics = grid.metrics
        self.active = [d for d in range(3) if self.axes[d].size > 1]
        values = np.concatenate([grid.gains, np.log(grid.taus)], axis=-1)
        values = values[tuple(
            slice(None) if d in self.active else 0 for d in range(3))]
        self._values = values
        self._rgi = None
        if self.active:
            self._rgi = RegularGridInterpolator(
                [to_metric(self.axes[d], self.metrics[d])
                 for d in self.active],
                values)

    def __call__(self, coords: Sequence[float]) -> ScheduledParams:
        clamped = False
        point = []
        for d in range(3):
            axis = self.axes[d]
            c = min(max(coords[d], axis[0]), axis[-1])
            clamped |= c != coords[d]
            if d in self.active:
                point.append(float(to_metric(c, self.metrics[d])))

        values = self._values if self._rgi is None else \
            self._rgi(np.array([point]))[0]
        n = self.order
        return ScheduledParams(values[:n].copy(), np.exp(values[n:]),
                               bool(clamped))
