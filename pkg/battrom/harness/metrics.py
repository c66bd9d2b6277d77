import numpy as np
from typing import Optional, Tuple
from ..exceptions import DomainError
from ..result import SimulationResult
from ..units import kelvin_to_celsius

# relative errors are taken against max(|T_plant in C|, floor)
REL_FLOOR_C = 1.0


def resample_zoh(times: np.ndarray, values: np.ndarray,
                 at: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(times, np.asarray(at) + 1e-9, side='right') - 1
    return np.asarray(values)[np.clip(idx, 0, None)]


def error_series(rom: SimulationResult, plant: SimulationResult,
                 t_start: Optional[float] = None,
                 t_stop: Optional[float] = None
                 ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Returns (times, T_rom - T_plant in K, T_plant in C) on the plant's
    time base, restricted to the overlap of both runs and the optional
    window."""
    lo = max(rom.times[0], plant.times[0])
    hi = min(rom.times[-1], plant.times[-1])
    if t_start is not None:
        lo = max(lo, t_start)
    if t_stop is not None:
        hi = min(hi, t_stop)
    mask = (plant.times >= lo - 1e-9) & (plant.times <= hi + 1e-9)
    if hi < lo or not np.any(mask):
        raise DomainError('trajectories do not overlap in time')
    times = plant.times[mask]
    ref = plant.t_avg[mask]
    diff = resample_zoh(rom.times, rom.t_avg, times) - ref
    return times, diff, kelvin_to_celsius(ref)


def metric_errors(rom: SimulationResult, plant: SimulationResult,
                  t_start: Optional[float] = None,
                  t_stop: Optional[float] = None) -> Tuple[float, float]:
    """Returns (max_abs_error_K, max_rel_error_pct); the relative error is
    pointwise, on Celsius values with a 1 C floor."""
    _, diff, ref_c = error_series(rom, plant, t_start, t_stop)
    err = np.abs(diff)
    rel = err / np.maximum(np.abs(ref_c), REL_FLOOR_C) * 100.0
    return float(np.max(err)), float(np.max(rel))


def cov(series) -> float:
    """Coefficient of variation in percent (population std / mean)."""
    series = np.asarray(series, dtype=float)
    if not series.size:
        raise DomainError('coefficient of variation of an empty series')
    mean = float(np.mean(series))
    if mean == 0.0:
        raise DomainError('coefficient of variation with zero mean')
    return float(np.std(series)) / mean * 100.0
