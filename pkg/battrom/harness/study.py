from __future__ import annotations
import abc
import json
import math
import os
from typing import Dict, Optional
from .config import StudyConfig
from .plotscript import write_plot_script
from ..exceptions import DomainError, NumericError
from ..result import SimulationResult

REPORT_FILE = 'report.json'


class StudyReport:

    __slots__ = ('name', 'cases', 'metrics', 'flags', 'provenance')

    def __init__(self, name: str, cases: Dict[str, SimulationResult],
                 metrics: Dict[str, Dict[str, float]],
                 flags: Optional[Dict[str, bool]] = None,
                 provenance: Optional[dict] = None):
        if not cases:
            raise DomainError(f'study {name} produced no cases')
        for case, values in metrics.items():
            for key, value in values.items():
                if not math.isfinite(value):
                    raise NumericError(
                        f'study {name}: metric {key} of {case} is {value}')
        self.name = name
        self.cases = cases
        self.metrics = metrics
        self.flags = flags or {}
        self.provenance = provenance or {}

    def to_dict(self) -> dict:
        return {
            'study': self.name,
            'cases': list(self.cases),
            'metrics': self.metrics,
            'flags': self.flags,
            'provenance': self.provenance,
        }

    def write(self, out_dir: str) -> str:
        """Writes one trajectory CSV per case, the report and a plot
        script to out_dir; returns the report path."""
        os.makedirs(out_dir, exist_ok=True)
        for case, result in self.cases.items():
            result.to_csv(os.path.join(out_dir, f'{case}.csv'))
        write_plot_script(out_dir, list(self.cases), title=self.name)
        path = os.path.join(out_dir, REPORT_FILE)
        with open(path, 'w') as fp:
            json.dump(self.to_dict(), fp, indent=2, sort_keys=True)
        return path

    def __repr__(self) -> str:
        return f'<StudyReport {self.name}: {len(self.cases)} case(s)>'


class StudyBase(abc.ABC):
    key: str  # Study key, used on the command line

    def __init_subclass__(cls, **kwargs):
        if not hasattr(cls, 'key'):
            raise NotImplementedError('key not implemented')
        if not isinstance(cls.key, str):
            raise NotImplementedError('key must be type str')
        return super().__init_subclass__(**kwargs)

    @classmethod
    @abc.abstractmethod
    def run(cls, config: StudyConfig) -> StudyReport:
        ...
