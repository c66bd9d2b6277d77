from __future__ import annotations
import logging
import numpy as np
from dataclasses import dataclass
from typing import Optional
from ..csvio import read_table, write_table
from ..exceptions import DomainError
from ..plant.mesh import PlantModel, PlantState
from ..plant.solver import DEFAULT_DT, simulate_plant
from ..schedule import Profiles, SchedulePoint

# |dT_avg/dt| at t_end below which a step response counts as settled, K/s
SETTLING_SLOPE = 1e-4
DEFAULT_EXTRACTION_T_END = 3000.0


@dataclass(frozen=True, eq=False)
class StepResponse:
    op: SchedulePoint
    t0_temperature: float  # K
    times: np.ndarray  # s
    delta_t: np.ndarray  # K

    def __post_init__(self):
        if self.op.q_gen == 0.0:
            raise DomainError('step response needs a non-zero q_gen step')
        if self.times.shape != self.delta_t.shape or self.times.size < 2:
            raise DomainError('step response needs matching samples')
        if self.times[0] != 0.0 or abs(self.delta_t[0]) > 1e-9:
            raise DomainError('step response must start at t=0, dT=0')
        if np.any(np.diff(self.times) <= 0.0):
            raise DomainError('step response times must increase')

    @property
    def normalized(self) -> np.ndarray:
        """delta_t / q_step in K m3/W."""
        return self.delta_t / self.op.q_gen

    @property
    def final_slope(self) -> float:
        return float((self.delta_t[-1] - self.delta_t[-2]) /
                     (self.times[-1] - self.times[-2]))

    def to_csv(self, path: str):
        op = self.op
        write_table(
            path,
            ('t_s', 'delta_T_K', 'normalized_K_m3_per_W'),
            (self.times, self.delta_t, self.normalized),
            comments=(f'q_gen={op.q_gen!r} m_dot={op.m_dot!r} '
                      f't_in_K={op.t_in!r} t0_K={self.t0_temperature!r}',))

    @classmethod
    def read_csv(cls, path: str) -> StepResponse:
        table, comments = read_table(path)
        try:
            meta = dict(item.split('=', 1) for item in comments[0].split())
            op = SchedulePoint(float(meta['q_gen']), float(meta['m_dot']),
                               float(meta['t_in_K']))
            t0 = float(meta['t0_K'])
        except (IndexError, KeyError, ValueError):
            raise DomainError(
                f'{path}: missing operating point comment line')
        return cls(op, t0, table['t_s'], table['delta_T_K'])


def extract_step_response(model: PlantModel, op: SchedulePoint,
                          t_end: float = DEFAULT_EXTRACTION_T_END,
                          dt: float = DEFAULT_DT,
                          t0_temperature: Optional[float] = None
                          ) -> StepResponse:
    """Steps q_gen from 0 to op.q_gen at t=0 with the cell and plate at
    t0_temperature (default: the configured initial temperature), the
    channels filled with inlet water and the coolant held at op.m_dot and
    op.t_in."""
    if op.q_gen == 0.0:
        raise DomainError('step response extraction needs q_gen != 0')
    t0 = model.config.initial_temperature if t0_temperature is None \
        else t0_temperature
    initial = PlantState.prefilled(model, t0, op.t_in)
    result = simulate_plant(model, Profiles.constant(op), t_end, dt,
                            initial=initial)
    delta = result.t_avg - t0
    delta[0] = 0.0
    resp = StepResponse(op, t0, result.times, delta)

    slope = resp.final_slope
    if abs(slope) >= SETTLING_SLOPE:
        logging.warning(
            f'step response not settled at t={t_end:g} s '
            f'(dT/dt={slope:.3g} K/s); {op}')
    return resp
