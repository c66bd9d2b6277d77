from __future__ import annotations
import logging
import numpy as np
from typing import Optional, Tuple
from .grid import LpvGrid, ScheduledParams
from ..exceptions import DomainError, NumericError
from ..result import SimulationResult
from ..rom.lti import foster_update
from ..schedule import Profiles, SchedulePoint, time_base


def interpolate_model(grid: LpvGrid, p: SchedulePoint) -> ScheduledParams:
    return grid.interpolator((p.q_gen, p.m_dot, p.t_in))


class LpvState:

    __slots__ = ('x', 'last_params', 'clamp_count')

    def __init__(self, x: np.ndarray,
                 last_params: Optional[ScheduledParams] = None,
                 clamp_count: int = 0):
        self.x = np.asarray(x, dtype=float)
        self.last_params = last_params
        self.clamp_count = clamp_count

    @classmethod
    def zero(cls, grid: LpvGrid) -> LpvState:
        return cls(np.zeros(grid.order))

    def temperature(self, grid: LpvGrid) -> float:
        return grid.t0_temperature + float(np.sum(self.x))

    def __repr__(self) -> str:
        return f'<LpvState x: {self.x} clamps: {self.clamp_count}>'


def step_lpv(grid: LpvGrid, state: LpvState, p: SchedulePoint,
             dt: float) -> Tuple[LpvState, float]:
    """Advances the shared mode states with parameters frozen at p."""
    if not dt > 0.0:
        raise DomainError(f'dt must be > 0, got {dt}')
    if state.x.shape != (grid.order,):
        raise DomainError(
            f'state has {state.x.size} modes, grid order is {grid.order}')
    params = interpolate_model(grid, p)
    x = foster_update(state.x, params.gains, params.taus, p.q_gen, dt)
    if not np.all(np.isfinite(x)):
        raise NumericError('LPV state became non-finite')
    new = LpvState(x, params, state.clamp_count + int(params.clamped))
    return new, new.temperature(grid)


def simulate_lpv(grid: LpvGrid, profiles: Profiles, t_end: float,
                 dt: float = 0.5,
                 state: Optional[LpvState] = None) -> SimulationResult:
    times = time_base(t_end, dt)
    state = LpvState.zero(grid) if state is None else state
    t_avg = np.empty_like(times)
    t_avg[0] = state.temperature(grid)
    start_clamps = state.clamp_count
    for i in range(1, times.size):
        state, t_avg[i] = step_lpv(
            grid, state, profiles.point_at(times[i - 1]), dt)

    clamps = state.clamp_count - start_clamps
    if clamps:
        logging.warning(
            f'scheduling left the grid hull on {clamps} of '
            f'{times.size - 1} steps (clamped)')
    return SimulationResult(times, t_avg, meta={
        'model': 'lpv',
        'hull_clamps': clamps,
        'final': state,
    })
