"""Single RC-branch equivalent circuit with SOC tracking and Bernardi heat
generation. Discharge current is positive.

The heat equation multiplies the bracket by the total cell current (A) and
divides by the cell volume, which gives a volumetric source in W/m3."""
from __future__ import annotations
import logging
import math
import numpy as np
from typing import Optional, Tuple
from .params import EcmParams
from ..exceptions import DomainError, NumericError
from ..schedule import Profile, time_base


class EcmState:
    __slots__ = ('soc', 'v_rc', 'temperature', 'saturated')

    soc: float
    v_rc: float  # V
    temperature: float  # K
    saturated: bool

    def __init__(self, soc: float, v_rc: float = 0.0,
                 temperature: float = 298.15, saturated: bool = False):
        if not 0.0 <= soc <= 1.0:
            raise DomainError(f'soc must be within [0, 1], got {soc}')
        if not temperature > 0.0:
            raise DomainError(
                f'temperature must be > 0 K, got {temperature}')
        self.soc = float(soc)
        self.v_rc = float(v_rc)
        self.temperature = float(temperature)
        self.saturated = saturated

    def with_temperature(self, temperature: float) -> EcmState:
        return EcmState(self.soc, self.v_rc, temperature, self.saturated)

    def __repr__(self) -> str:
        return (f'soc: {self.soc:.4f} v_rc: {self.v_rc:.4f} V '
                f'T: {self.temperature:.2f} K')


def _check_soc(soc: float):
    if not 0.0 <= soc <= 1.0:
        raise DomainError(f'soc must be within [0, 1], got {soc}')


def ocv(params: EcmParams, soc: float) -> float:
    _check_soc(soc)
    return params.ocv_table(soc)


def entropy_coeff(params: EcmParams, soc: float) -> float:
    """Returns dU_OC/dT in V/K (may be negative)."""
    _check_soc(soc)
    return params.entropy_table(soc)


def step_ecm(params: EcmParams, state: EcmState, current: float,
             dt: float) -> Tuple[EcmState, float]:
    if not (math.isfinite(current) and math.isfinite(dt)):
        raise NumericError(f'non-finite input: current={current} dt={dt}')
    if not dt > 0.0:
        raise DomainError(f'dt must be > 0, got {dt}')

    soc, temp = state.soc, state.temperature
    r1 = params.r1_table(soc, temp)
    tau = r1 * params.c1_table(soc, temp)
    decay = math.exp(-dt / tau)
    v_rc = state.v_rc * decay + r1 * current * (1.0 - decay)

    soc_new = soc - current * dt / (3600.0 * params.capacity)
    saturated = soc_new < 0.0 or soc_new > 1.0
    if saturated:
        soc_new = min(max(soc_new, 0.0), 1.0)

    v = params.ocv_table(soc_new) - \
        current * params.r0_table(soc_new, temp) - v_rc
    if not math.isfinite(v):
        raise NumericError(f'terminal voltage is not finite: {v}')
    return EcmState(soc_new, v_rc, temp, saturated), v


def heat_generation(current: float, u_oc: float, v: float,
                    temperature: float, duoc_dt: float,
                    cell_volume: float) -> float:
    """Returns the volumetric heat generation in W/m3:
    irreversible I(U_OC - V) minus reversible I T dU_OC/dT."""
    if not cell_volume > 0.0:
        raise DomainError(f'cell_volume must be > 0, got {cell_volume}')
    if not temperature > 0.0:
        raise DomainError(f'temperature must be > 0 K, got {temperature}')
    irreversible = current * (u_oc - v)
    reversible = current * temperature * duoc_dt
    return (irreversible - reversible) / cell_volume


def ecm_heat(params: EcmParams, state: EcmState, current: float,
             v: float) -> float:
    return heat_generation(
        current,
        params.ocv_table(state.soc),
        v,
        state.temperature,
        params.entropy_table(state.soc),
        params.cell_volume)


def simulate_ecm(params: EcmParams, state: EcmState, current: Profile,
                 t_end: float, dt: float,
                 temperature: Optional[float] = None) -> dict:
    """Open loop run at a fixed cell temperature. Returns arrays keyed by
    t_s, soc, v, current_a and q_gen_W_m3."""
    if temperature is not None:
        state = state.with_temperature(temperature)
    times = time_base(t_end, dt)
    soc = np.empty_like(times)
    volts = np.empty_like(times)
    amps = current.sample(times)
    q_gen = np.zeros_like(times)

    soc[0] = state.soc
    volts[0] = params.ocv_table(state.soc) - state.v_rc
    n_saturated = 0
    for i in range(1, times.size):
        state, volts[i] = step_ecm(params, state, amps[i - 1], dt)
        soc[i] = state.soc
        q_gen[i] = ecm_heat(params, state, amps[i - 1], volts[i])
        n_saturated += state.saturated

    if n_saturated:
        logging.warning(f'SOC saturated in {n_saturated} step(s)')
    return {'t_s': times, 'soc': soc, 'v': volts, 'current_a': amps,
            'q_gen_W_m3': q_gen}
