from __future__ import annotations
import numpy as np
from scipy.signal import lfilter
from typing import Optional, Tuple
from .foster import FosterLtiModel
from ..result import SimulationResult
from ..schedule import Profile, time_base


def zoh_coefficients(taus: np.ndarray, dt: float
                     ) -> Tuple[np.ndarray, np.ndarray]:
    """Returns (a, 1 - a) with a = exp(-dt / tau) per mode."""
    x = -dt / np.asarray(taus, dtype=float)
    return np.exp(x), -np.expm1(x)


def foster_update(x: np.ndarray, gains: np.ndarray, taus: np.ndarray,
                  u: float, dt: float) -> np.ndarray:
    """Exact zero-order-hold update of the mode states (K)."""
    a, b = zoh_coefficients(taus, dt)
    return a * x + (gains * b) * u


def simulate_lti(model: FosterLtiModel, q_profile: Profile,
                 t0_temperature: Optional[float] = None,
                 t_end: float = 1800.0, dt: float = 0.5) -> SimulationResult:
    """Drives the Foster model with q_gen(t). Coolant flow and inlet
    temperature do not enter: they are fixed by the extraction point."""
    t0 = model.t0_temperature if t0_temperature is None else t0_temperature
    times = time_base(t_end, dt)
    u = q_profile.sample(times)
    a, b = zoh_coefficients(model.taus, dt)

    total = np.zeros_like(times)
    for g, ai, bi in zip(model.gains, a, b):
        # x[n] = a x[n-1] + g b u[n-1]
        total += lfilter([0.0, g * bi], [1.0, -ai], u)
    return SimulationResult(times, t0 + total,
                            meta={'model': 'lti', 'op': model.op.to_dict()})
