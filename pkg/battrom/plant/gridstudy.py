from __future__ import annotations
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence
from .config import PlantConfig
from .mesh import build_plant
from .solver import steady_state
from ..exceptions import DomainError
from ..schedule import SchedulePoint

CONVERGENCE_PCT = 0.5

# diffusion dominated reference case for the mesh study
DEFAULT_POINT = SchedulePoint.from_celsius(5e5, 2e-3, 5.0)


@dataclass
class GridLevel:
    factor: int
    nodes: int
    t_avg: float  # K
    change_pct: float  # of T_avg against the previous level
    rise_change_pct: float  # of T_avg - T_in against the previous level


@dataclass
class GridIndependenceReport:
    point: SchedulePoint
    levels: List[GridLevel] = field(default_factory=list)
    tolerance_pct: float = CONVERGENCE_PCT

    @property
    def converged(self) -> bool:
        return len(self.levels) >= 2 and \
            self.levels[-1].change_pct < self.tolerance_pct

    def to_dict(self) -> dict:
        return {
            'point': self.point.to_dict(),
            'converged': self.converged,
            'tolerance_pct': self.tolerance_pct,
            'levels': [vars(lv) for lv in self.levels],
        }


def grid_independence(config: PlantConfig,
                      refinement_levels: Sequence[int] = (1, 2, 4),
                      point: Optional[SchedulePoint] = None,
                      tolerance_pct: float = CONVERGENCE_PCT
                      ) -> GridIndependenceReport:
    """Refines the axial and stack node counts of `config` by each factor
    and compares the steady cell-average temperature."""
    if len(refinement_levels) < 2:
        raise DomainError('grid independence needs at least two levels')
    point = point or DEFAULT_POINT
    report = GridIndependenceReport(point, tolerance_pct=tolerance_pct)
    prev = None
    for factor in refinement_levels:
        model = build_plant(config.refined(int(factor)))
        t_avg = model.cell_average(model.pack(steady_state(model, point)))
        if prev is None:
            change = rise_change = 0.0
        else:
            change = abs(t_avg - prev) / abs(prev) * 100.0
            rise = prev - point.t_in
            rise_change = abs(t_avg - prev) / max(abs(rise), 1e-12) * 100.0
        report.levels.append(GridLevel(
            int(factor), model.n_nodes, t_avg, change, rise_change))
        logging.info(f'mesh x{factor}: {model.n_nodes} nodes, '
                     f'T_avg {t_avg:.4f} K')
        prev = t_avg
    return report
