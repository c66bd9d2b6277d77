"""Lookup tables for the equivalent circuit parameters. Interpolation is
piecewise linear and clamped at the end nodes (no extrapolation)."""
from __future__ import annotations
import numpy as np
from scipy.interpolate import RegularGridInterpolator
from typing import Iterable, List, Sequence
from ..exceptions import ConfigError


class Table1D:

    __slots__ = ('x', 'y')

    def __init__(self, x: Sequence[float], y: Sequence[float]):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size < 1:
            raise ConfigError('table needs matching, non-empty axes')
        if np.any(np.diff(x) <= 0.0):
            raise ConfigError('table nodes must be strictly increasing')
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ConfigError('table contains non-finite values')
        self.x = x
        self.y = y

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> Table1D:
        rows = sorted((float(a), float(b)) for a, b in pairs)
        return cls([r[0] for r in rows], [r[1] for r in rows])

    @classmethod
    def flat(cls, value: float) -> Table1D:
        return cls([0.0, 1.0], [value, value])

    def __call__(self, x: float) -> float:
        # np.interp clamps to the end values
        return float(np.interp(x, self.x, self.y))

    def to_pairs(self) -> List[List[float]]:
        return [[float(a), float(b)] for a, b in zip(self.x, self.y)]


class Table2D:
    """Table over (SOC, temperature) given on a full rectangular grid."""

    __slots__ = ('soc', 'temp', 'values', '_interp')

    def __init__(self, soc: Sequence[float], temp: Sequence[float],
                 values: np.ndarray):
        soc = np.asarray(soc, dtype=float)
        temp = np.asarray(temp, dtype=float)
        values = np.asarray(values, dtype=float)
        if values.shape != (soc.size, temp.size):
            raise ConfigError(
                f'table values shape {values.shape} does not match axes '
                f'({soc.size}, {temp.size})')
        for axis in (soc, temp):
            if axis.size < 1 or np.any(np.diff(axis) <= 0.0):
                raise ConfigError('table axes must be strictly increasing')
        if not np.all(np.isfinite(values)):
            raise ConfigError('table contains non-finite values')
        self.soc = soc
        self.temp = temp
        self.values = values
        self._interp = None
        if soc.size > 1 and temp.size > 1:
            self._interp = RegularGridInterpolator((soc, temp), values)

    @classmethod
    def from_triples(cls, rows: Iterable[Sequence[float]]) -> Table2D:
        rows = [tuple(float(v) for v in row) for row in rows]
        if not rows or any(len(row) != 3 for row in rows):
            raise ConfigError('expected rows of [soc, temp_k, value]')
        soc = sorted({r[0] for r in rows})
        temp = sorted({r[1] for r in rows})
        values = np.full((len(soc), len(temp)), np.nan)
        for s, t, v in rows:
            values[soc.index(s), temp.index(t)] = v
        if np.any(np.isnan(values)):
            raise ConfigError('(soc, temp) table is not a full grid')
        return cls(soc, temp, values)

    @classmethod
    def flat(cls, value: float) -> Table2D:
        return cls([0.0, 1.0], [298.15], np.full((2, 1), value))

    def __call__(self, soc: float, temp: float) -> float:
        soc = float(np.clip(soc, self.soc[0], self.soc[-1]))
        temp = float(np.clip(temp, self.temp[0], self.temp[-1]))
        if self._interp is not None:
            return float(self._interp((soc, temp)))
        if self.temp.size == 1:
            return float(np.interp(soc, self.soc, self.values[:, 0]))
        return float(np.interp(temp, self.temp, self.values[0, :]))

    def min(self) -> float:
        return float(self.values.min())

    def to_triples(self) -> List[List[float]]:
        return [[float(s), float(t), float(self.values[i, j])]
                for i, s in enumerate(self.soc)
                for j, t in enumerate(self.temp)]
