from __future__ import annotations
import logging
import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu
from typing import Optional
from .mesh import PlantModel, PlantState
from ..exceptions import DomainError, NumericError, StepError
from ..result import SimulationResult
from ..schedule import Profiles, SchedulePoint, time_base

DEFAULT_DT = 0.5


class PlantIntegrator:
    """Time stepper for a plant model.

    semi-implicit: conduction, film and advection links are implicit
    (backward Euler); the heat source and the inlet temperature are frozen
    at their values at the start of the step. Unconditionally stable.

    explicit: forward Euler; `dt` must stay below `stability_limit()`.
    """

    def __init__(self, model: PlantModel, dt: float = DEFAULT_DT,
                 scheme: Optional[str] = None):
        if not dt > 0.0:
            raise DomainError(f'dt must be > 0, got {dt}')
        self.model = model
        self.dt = dt
        self.scheme = scheme or model.config.scheme
        self._cp_w = model.config.water.cp
        self._c_dt = model.capacity / dt
        self._diag_k = model.conductance.diagonal()
        self._diag_adv = model.advection.diagonal()
        self._flow: Optional[float] = None
        self._a: Optional[sp.csr_matrix] = None
        self._lu = None

    def stability_limit(self, m_dot: float) -> float:
        diag = self._diag_k + m_dot * self._cp_w * self._diag_adv
        mask = diag > 0.0
        if not np.any(mask):
            return float('inf')
        return float(np.min(self.model.capacity[mask] / diag[mask]))

    def _operator(self, m_dot: float) -> sp.csr_matrix:
        """Conduction plus advection, W/K; both schemes step with it."""
        if self._flow != m_dot:
            m = self.model
            self._a = (m.conductance +
                       (m_dot * self._cp_w) * m.advection).tocsr()
            self._lu = None
            self._flow = m_dot
        return self._a

    def _factorized(self, m_dot: float):
        a = self._operator(m_dot)
        if self._lu is None:
            self._lu = splu(sp.csc_matrix(sp.diags(self._c_dt) + a))
            logging.debug(f'plant matrix factorized for m_dot={m_dot:g}')
        return self._lu

    def forcing(self, p: SchedulePoint) -> np.ndarray:
        m = self.model
        return p.q_gen * m.source + \
            (p.m_dot * self._cp_w * p.t_in) * m.inlet

    def advance(self, vec: np.ndarray, p: SchedulePoint) -> np.ndarray:
        if self.scheme == 'explicit':
            limit = self.stability_limit(p.m_dot)
            if self.dt > limit:
                raise StepError(
                    f'explicit step {self.dt:g} s exceeds the stability '
                    f'limit {limit:g} s', suggested_dt=0.9 * limit)
            flux = self.forcing(p) - self._operator(p.m_dot) @ vec
            new = vec + flux / self._c_dt
        else:
            new = self._factorized(p.m_dot).solve(
                self._c_dt * vec + self.forcing(p))
        if not np.all(np.isfinite(new)):
            raise NumericError('plant temperatures became non-finite')
        return new

    def advected(self, vec: np.ndarray, p: SchedulePoint) -> float:
        """Heat flow carried out by the coolant, W."""
        m = self.model
        return p.m_dot * self._cp_w * (
            m.outlet @ vec - m.flow_fraction * p.t_in)

    def step(self, state: PlantState, p: SchedulePoint) -> PlantState:
        return self.model.unpack(self.advance(self.model.pack(state), p))


def step_plant(model: PlantModel, state: PlantState, p: SchedulePoint,
               dt: float = DEFAULT_DT,
               scheme: Optional[str] = None) -> PlantState:
    return PlantIntegrator(model, dt, scheme).step(state, p)


def steady_state(model: PlantModel, p: SchedulePoint) -> PlantState:
    if p.m_dot <= 0.0 or model.config.nusselt <= 0.0:
        raise DomainError('no steady state without coolant exchange')
    flow = p.m_dot * model.config.water.cp
    a = model.conductance + flow * model.advection
    b = p.q_gen * model.source + flow * p.t_in * model.inlet
    return model.unpack(splu(sp.csc_matrix(a)).solve(b))


def simulate_plant(model: PlantModel, profiles: Profiles, t_end: float,
                   dt: float = DEFAULT_DT,
                   initial: Optional[PlantState] = None,
                   scheme: Optional[str] = None) -> SimulationResult:
    """Runs the plant under zero-order-hold drive signals. Without
    `initial` the solid starts at the configured initial temperature and
    the channels hold water at the inlet temperature of t=0. The result
    carries an energy ledger in `meta['energy']` (joules, modeled
    domain) and the final field in `meta['final']`."""
    times = time_base(t_end, dt)
    integrator = PlantIntegrator(model, dt, scheme)
    if initial is None:
        initial = PlantState.prefilled(
            model, model.config.initial_temperature,
            profiles.point_at(0.0).t_in)
    vec = model.pack(initial)

    t_avg = np.empty_like(times)
    t_max = np.empty_like(times)
    t_out = np.empty_like(times)
    t_avg[0] = model.cell_average(vec)
    t_max[0] = model.cell_max(vec)
    t_out[0] = model.outlet_temperature(vec)

    u0 = model.internal_energy(vec)
    generated = advected = 0.0
    explicit = integrator.scheme == 'explicit'
    for i in range(1, times.size):
        p = profiles.point_at(times[i - 1])
        new = integrator.advance(vec, p)
        generated += p.q_gen * model.cell_volume * dt
        advected += integrator.advected(vec if explicit else new, p) * dt
        vec = new
        t_avg[i] = model.cell_average(vec)
        t_max[i] = model.cell_max(vec)
        t_out[i] = model.outlet_temperature(vec)

    stored = model.internal_energy(vec) - u0
    residual = generated - stored - advected
    scale = max(abs(generated), abs(stored), abs(advected), 1e-12)
    energy = {
        'generated_J': generated,
        'advected_J': advected,
        'stored_J': stored,
        'residual_J': residual,
        'relative_residual': abs(residual) / scale,
    }
    return SimulationResult(times, t_avg, t_max, t_out,
                            meta={'energy': energy,
                                  'final': model.unpack(vec)})
