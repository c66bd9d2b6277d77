from __future__ import annotations
import numpy as np
from typing import Dict, Optional
from .csvio import read_table, write_table

TRAJECTORY_COLUMNS = ('t_s', 'T_avg_K', 'T_max_K', 'T_out_K')


class SimulationResult:
    """Thermal trajectory sampled on a uniform time base. Reduced order
    models have no max or outlet temperature; those columns hold NaN."""

    __slots__ = ('times', 't_avg', 't_max', 't_out', 'extra', 'meta')

    def __init__(self, times: np.ndarray, t_avg: np.ndarray,
                 t_max: Optional[np.ndarray] = None,
                 t_out: Optional[np.ndarray] = None,
                 extra: Optional[Dict[str, np.ndarray]] = None,
                 meta: Optional[dict] = None):
        nan = np.full_like(np.asarray(t_avg, dtype=float), np.nan)
        self.times = np.asarray(times, dtype=float)
        self.t_avg = np.asarray(t_avg, dtype=float)
        self.t_max = nan if t_max is None else np.asarray(t_max, float)
        self.t_out = nan.copy() if t_out is None else np.asarray(t_out, float)
        self.extra = extra or {}
        self.meta = meta or {}

    def __len__(self) -> int:
        return self.times.size

    def value_at(self, t: float) -> float:
        idx = int(np.searchsorted(self.times, t + 1e-9, side='right')) - 1
        return float(self.t_avg[max(idx, 0)])

    def window(self, t_a: float, t_b: float) -> np.ndarray:
        """T_avg samples with t_a <= t <= t_b."""
        mask = (self.times >= t_a - 1e-9) & (self.times <= t_b + 1e-9)
        return self.t_avg[mask]

    def window_slope(self, t_a: float, t_b: float) -> float:
        """Net slope (K/s) of T_avg between two instants."""
        return (self.value_at(t_b) - self.value_at(t_a)) / (t_b - t_a)

    def std(self, t_start: float = 0.0) -> float:
        return float(np.std(self.t_avg[self.times >= t_start - 1e-9]))

    def to_csv(self, path: str):
        names = list(TRAJECTORY_COLUMNS) + list(self.extra)
        cols = [self.times, self.t_avg, self.t_max, self.t_out] + \
            list(self.extra.values())
        write_table(path, names, cols)

    @classmethod
    def read_csv(cls, path: str) -> SimulationResult:
        table, _ = read_table(path)
        extra = {k: v for k, v in table.items()
                 if k not in TRAJECTORY_COLUMNS}
        return cls(table['t_s'], table['T_avg_K'], table.get('T_max_K'),
                   table.get('T_out_K'), extra)
