import logging
import numpy as np
from typing import Dict, Optional, Sequence, Tuple
from .grid import DEFAULT_METRICS, LpvGrid
from ..exceptions import BuildError, DomainError, FitError
from ..plant import DEFAULT_DT, PlantModel
from ..rom import DEFAULT_ORDER, DEFAULT_EXTRACTION_T_END, FosterLtiModel, \
    StepResponse, extract_step_response, fit_foster, fit_foster_joint, \
    pad_order, pad_taus
from ..schedule import SchedulePoint
from ..workers import run_parallel

GRID_FORMAT_VERSION = 1

# extra attempts with shifted seeds when a fit loses modes; a vertex still
# short of the order afterwards is padded
REFIT_ATTEMPTS = 3


def extract_grid_responses(
        plant: PlantModel,
        q_axis: Sequence[float],
        m_axis: Sequence[float],
        t_axis: Sequence[float],
        t_end: float = DEFAULT_EXTRACTION_T_END,
        dt: float = DEFAULT_DT,
        t0_temperature: Optional[float] = None,
        workers: Optional[int] = None) -> np.ndarray:
    """Step responses for every axis combination (t_axis in K), as an
    object array shaped (nq, nm, nt)."""
    shape = (len(q_axis), len(m_axis), len(t_axis))
    if min(shape) < 1:
        raise DomainError('every grid axis needs at least one value')
    indices = list(np.ndindex(*shape))
    jobs = [(plant, SchedulePoint(q_axis[i], m_axis[j], t_axis[k]),
             t_end, dt, t0_temperature) for i, j, k in indices]
    logging.info(f'extracting {len(jobs)} step response(s)')
    responses = np.empty(shape, dtype=object)
    for index, resp in zip(indices,
                           run_parallel(extract_step_response, jobs, workers)):
        responses[index] = resp
    return responses


def _fit_vertex(resp: StepResponse, index: Tuple[int, int, int], order: int,
                seed: int) -> FosterLtiModel:
    model = None
    for attempt in range(REFIT_ATTEMPTS + 1):
        try:
            model = fit_foster(resp, order, seed + attempt)
        except FitError as e:
            raise BuildError(f'vertex {index} ({resp.op!r}): {e}',
                             vertex=index)
        if model.order == order:
            return model
        logging.info(f'vertex {index} collapsed to order {model.order}; '
                     f'refitting with seed {seed + attempt + 1}')
    return pad_order(model, order)


def _fit_slice(responses: Sequence[StepResponse], j: int, order: int,
               seed: int) -> np.ndarray:
    index = (0, j, 0)
    taus = None
    for attempt in range(REFIT_ATTEMPTS + 1):
        try:
            models = fit_foster_joint(responses, order, seed + attempt)
        except FitError as e:
            raise BuildError(f'flow slice {j} at vertex {index}: {e}',
                             vertex=index)
        taus = models[0].taus
        if taus.size == order:
            return taus
        logging.info(f'flow slice {j} collapsed to order {taus.size}; '
                     f'refitting')
    logging.warning(f'flow slice {j}: padding order {taus.size} to {order}')
    return pad_taus(taus, order)


def fit_grid(responses: np.ndarray,
             order: int = DEFAULT_ORDER,
             tie_modes: bool = True,
             seed: int = 0,
             metrics: Tuple[str, str, str] = DEFAULT_METRICS,
             provenance: Optional[Dict] = None) -> LpvGrid:
    """Fits one Foster model per vertex.

    With tie_modes the time constants are shared along each m_dot slice
    (modes depend on the flow only) and only the gains vary with q_gen and
    t_in; otherwise every vertex is fitted on its own.
    """
    shape = responses.shape
    models = np.empty(shape, dtype=object)
    if tie_modes:
        for j in range(shape[1]):
            block = [responses[i, j, k]
                     for i in range(shape[0]) for k in range(shape[2])]
            taus = _fit_slice(block, j, order, seed)
            for i in range(shape[0]):
                for k in range(shape[2]):
                    models[i, j, k] = fit_foster(responses[i, j, k],
                                                 taus=taus)
    else:
        for index in np.ndindex(*shape):
            models[index] = _fit_vertex(responses[index], index, order, seed)

    q_axis = [responses[i, 0, 0].op.q_gen for i in range(shape[0])]
    m_axis = [responses[0, j, 0].op.m_dot for j in range(shape[1])]
    t_axis = [responses[0, 0, k].op.t_in for k in range(shape[2])]
    return LpvGrid.from_models(q_axis, m_axis, t_axis, models, metrics,
                               provenance)


def build_lpv_grid(plant: PlantModel,
                   q_axis: Sequence[float],
                   m_axis: Sequence[float],
                   t_axis: Sequence[float],
                   order: int = DEFAULT_ORDER,
                   t_end: float = DEFAULT_EXTRACTION_T_END,
                   dt: float = DEFAULT_DT,
                   tie_modes: bool = True,
                   seed: int = 0,
                   metrics: Tuple[str, str, str] = DEFAULT_METRICS,
                   t0_temperature: Optional[float] = None,
                   workers: Optional[int] = None) -> LpvGrid:
    """Extracts and fits every vertex of the (q_gen, m_dot, t_in) grid;
    t_axis is in kelvin."""
    responses = extract_grid_responses(
        plant, q_axis, m_axis, t_axis, t_end, dt, t0_temperature, workers)
    t0 = responses.flat[0].t0_temperature
    provenance = {
        'plant_config_hash': plant.config.config_hash(),
        't_end': t_end,
        'dt': dt,
        't0_K': t0,
        'order': order,
        'tie_modes': tie_modes,
        'seed': seed,
        'version': GRID_FORMAT_VERSION,
    }
    grid = fit_grid(responses, order, tie_modes, seed, metrics, provenance)
    logging.info(f'LPV grid {grid.shape} built, worst vertex fit rms '
                 f'{float(np.max(grid.fit_rms)):.3e}')
    return grid
