import json
import logging
import os
import sys
import time
from typing import Dict, Optional, Tuple, Type
from .config import StudyConfig
from .study import StudyBase, StudyReport
from .studies import STUDIES
from ..exceptions import RomException

DRY_RUN = os.getenv('DRY_RUN', '0') != '0'


class StudyRunner:
    """Runs registered studies and writes their reports. A failing study
    yields an error document instead of an exception."""

    def __init__(self, studies: Tuple[Type[StudyBase], ...] = STUDIES):
        self._studies: Dict[str, Type[StudyBase]] = {
            study.key: study for study in studies}

    @property
    def keys(self) -> Tuple[str, ...]:
        return tuple(self._studies)

    def run(self, key: str, config: StudyConfig,
            out_dir: Optional[str] = None
            ) -> Tuple[Optional[StudyReport], Optional[dict]]:
        study = self._studies.get(key)
        if study is None:
            logging.warning(f'Study {key} not implemented')
            return None, RomException(f'unknown study: {key}').to_dict()

        ts = time.time()
        try:
            report = study.run(config)
        except RomException as e:
            report, error, level = None, e.to_dict(), e.severity.log_level
        except Exception as e:
            msg = str(e) or type(e).__name__
            report, error, level = None, RomException(msg).to_dict(), \
                logging.ERROR
        else:
            error = None

        duration = time.time() - ts
        if error:
            logging.log(level, f'Error: {error}; study {key}')
        else:
            logging.info(f'Study {key} finished in {duration:.1f} s')
            self._output(report, out_dir)
        return report, error

    def _output(self, report: StudyReport, out_dir: Optional[str]):
        if DRY_RUN or out_dir is None:
            output = json.dumps(report.to_dict(), indent=2, sort_keys=True)
            print('-'*80, file=sys.stderr)
            print(output)
            print('', file=sys.stderr)
            return
        path = report.write(os.path.join(out_dir, report.name))
        logging.info(f'Report written to {path}')


study_runner = StudyRunner()
