"""Study scenarios: LTI failure under a cold inlet, LPV validation, the
variable flow study and the closed loop ECM run."""
import logging
import numpy as np
from typing import Dict, List, Optional
from .config import StudyConfig
from .flow import make_proportional_flow
from .metrics import cov, metric_errors
from .study import StudyBase, StudyReport
from ..ecm import EcmParams, EcmState, ecm_heat, load_ecm_params, step_ecm
from ..exceptions import DomainError
from ..lpv import LpvGrid, LpvState, extract_grid_responses, fit_grid, \
    simulate_lpv, step_lpv
from ..lpv.build import GRID_FORMAT_VERSION
from ..plant import PlantIntegrator, PlantModel, PlantState, build_plant, \
    simulate_plant
from ..result import SimulationResult
from ..rom import FosterLtiModel, fit_foster, simulate_lti
from ..schedule import Profiles, SchedulePoint, time_base
from ..units import celsius_to_kelvin


def _case_name(prefix: str, value: float) -> str:
    return f'{prefix}_{value:g}'.replace('+', '')


def _provenance(config: StudyConfig, **extra) -> dict:
    return {
        'plant_config_hash': config.plant.config_hash(),
        'study_config_hash': config.config_hash(),
        'version': GRID_FORMAT_VERSION,
        **extra,
    }


def validation_responses(config: StudyConfig,
                         plant: Optional[PlantModel] = None) -> np.ndarray:
    """Step responses along the validation q_gen axis at the validation
    flow and inlet temperature."""
    plant = plant or build_plant(config.plant)
    return extract_grid_responses(
        plant, config.q_axis, [config.m_dot], [config.t_in_k],
        config.extraction_t_end, config.dt, workers=config.workers)


def validation_grid(config: StudyConfig,
                    responses: Optional[np.ndarray] = None) -> LpvGrid:
    if responses is None:
        responses = validation_responses(config)
    return fit_grid(responses, config.order, config.tie_modes, config.seed,
                    config.metrics, _grid_provenance(config))


def flow_responses(config: StudyConfig,
                   plant: Optional[PlantModel] = None) -> np.ndarray:
    """Step responses at every vertex of the three-parameter grid."""
    plant = plant or build_plant(config.plant)
    t_axis = [celsius_to_kelvin(t) for t in config.flow_t_axis]
    return extract_grid_responses(
        plant, config.flow_q_axis, config.flow_m_axis, t_axis,
        config.flow_extraction_t_end, config.dt, workers=config.workers)


def flow_grid(config: StudyConfig,
              plant: Optional[PlantModel] = None,
              responses: Optional[np.ndarray] = None) -> LpvGrid:
    if responses is None:
        responses = flow_responses(config, plant)
    return fit_grid(responses, config.order, config.tie_modes, config.seed,
                    config.metrics, _grid_provenance(
                        config, config.flow_extraction_t_end))


def _grid_provenance(config: StudyConfig,
                     t_end: Optional[float] = None) -> dict:
    return {
        'plant_config_hash': config.plant.config_hash(),
        't_end': t_end or config.extraction_t_end,
        'dt': config.dt,
        't0_K': config.plant.initial_temperature,
        'order': config.order,
        'tie_modes': config.tie_modes,
        'seed': config.seed,
        'version': GRID_FORMAT_VERSION,
    }


def _validation_profiles(config: StudyConfig) -> Profiles:
    return Profiles.from_heat(
        config.validation_heat(), config.m_dot, config.t_in_k)


def independent_lti_models(config: StudyConfig,
                           responses: np.ndarray) -> List[FosterLtiModel]:
    """One Foster model per validation q_gen level, each fitted on its
    own step response."""
    models = []
    for resp in responses[:, 0, 0]:
        model = fit_foster(resp, config.order, config.seed)
        logging.info(f'LTI model at q_gen {resp.op.q_gen:g}: order '
                     f'{model.order}, fit rms {model.fit_rms:.3e}')
        models.append(model)
    return models


def scenario_lti_failure(config: StudyConfig,
                         responses: Optional[np.ndarray] = None,
                         plant_run: Optional[SimulationResult] = None
                         ) -> StudyReport:
    """Plant against one independently fitted LTI model per validation
    q_gen level, on the validation heat profile."""
    plant = build_plant(config.plant)
    if responses is None:
        responses = validation_responses(config, plant)
    if plant_run is None:
        plant_run = simulate_plant(plant, _validation_profiles(config),
                                   config.t_end, config.dt)

    window = config.early_window
    plant_slope = plant_run.window_slope(0.0, window)
    plant_cools = bool(np.all(np.diff(plant_run.window(0.0, window)) < 0.0))
    cases = {'plant': plant_run}
    metrics = {'plant': {'early_slope_K_s': plant_slope}}
    flags = {'plant_cools_early': plant_cools}
    early = {}
    for model in independent_lti_models(config, responses):
        q = model.op.q_gen
        name = _case_name('lti_q', q)
        run = simulate_lti(model, config.validation_heat(),
                           t_end=config.t_end, dt=config.dt)
        max_abs, max_rel = metric_errors(run, plant_run)
        early_abs, _ = metric_errors(run, plant_run, t_stop=window)
        slope = run.window_slope(0.0, window)
        cases[name] = run
        early[q] = early_abs
        metrics[name] = {
            'max_abs_error_K': max_abs,
            'max_rel_error_pct': max_rel,
            'early_abs_error_K': early_abs,
            'early_slope_K_s': slope,
            'order': float(model.order),
        }
        flags[f'sign_disagreement_{name}'] = plant_cools and slope >= 0.0

    for name, ok in flags.items():
        if name.startswith('sign_disagreement') and ok:
            logging.warning(f'{name}: LTI heats while the plant cools '
                            f'during the first {window:g} s')
    low = [e for q, e in early.items() if q <= 5e5]
    high = [e for q, e in early.items() if q >= 5e6]
    if low and high:
        flags['low_q_models_track_early_cooling_better'] = \
            min(low) < min(high)
    return StudyReport('lti-failure', cases, metrics, flags,
                       _provenance(config))


def scenario_lpv_validation(config: StudyConfig,
                            grid: Optional[LpvGrid] = None,
                            plant_run: Optional[SimulationResult] = None,
                            responses: Optional[np.ndarray] = None
                            ) -> StudyReport:
    """LPV against the plant on the validation scenario. The independently
    fitted LTI model of every validation q_gen level runs alongside for
    comparison."""
    plant = build_plant(config.plant)
    if responses is None:
        responses = validation_responses(config, plant)
    grid = grid or validation_grid(config, responses)
    profiles = _validation_profiles(config)
    if plant_run is None:
        plant_run = simulate_plant(plant, profiles, config.t_end, config.dt)
    lpv_run = simulate_lpv(grid, profiles, config.t_end, config.dt)
    max_abs, max_rel = metric_errors(lpv_run, plant_run)
    cases = {'plant': plant_run, 'lpv': lpv_run}
    metrics = {'lpv': {
        'max_abs_error_K': max_abs,
        'max_rel_error_pct': max_rel,
        'hull_clamps': float(lpv_run.meta['hull_clamps']),
    }}
    lti_abs = []
    for model in independent_lti_models(config, responses):
        name = _case_name('lti_q', model.op.q_gen)
        run = simulate_lti(model, config.validation_heat(),
                           t_end=config.t_end, dt=config.dt)
        lti_max_abs, lti_max_rel = metric_errors(run, plant_run)
        lti_abs.append(lti_max_abs)
        cases[name] = run
        metrics[name] = {'max_abs_error_K': lti_max_abs,
                         'max_rel_error_pct': lti_max_rel}

    flags = {
        'within_tolerance': max_rel < config.tolerance_pct,
        'lpv_beats_every_lti': all(max_abs < e for e in lti_abs),
        'no_hull_clamps': lpv_run.meta['hull_clamps'] == 0,
    }
    logging.info(f'LPV validation: max error {max_abs:.4f} K '
                 f'({max_rel:.3f}%)')
    return StudyReport('lpv-validation', cases, metrics, flags,
                       _provenance(config, grid=grid.provenance))


def scenario_flow_study(config: StudyConfig,
                        grid: Optional[LpvGrid] = None) -> StudyReport:
    """Cell temperature under the flow cases: constant flow and flows
    proportional to the heat generation with rising variation."""
    grid = grid or flow_grid(config)
    heat = config.flow_heat()
    t_end = config.flow_t_end
    steps = time_base(t_end, config.dt)[:-1]
    cases: Dict[str, SimulationResult] = {}
    metrics = {}
    stds = []
    on_target = True
    for n, target in enumerate(config.flow_covs, start=1):
        name = f'case_{n}'
        flow = make_proportional_flow(heat, config.flow_mean, target, t_end)
        profiles = Profiles.from_heat(heat, config.flow_mean,
                                      config.flow_t_in_k, flow)
        run = simulate_lpv(grid, profiles, t_end, config.dt)
        held = flow.sample(steps)
        run.extra['m_dot_kg_s'] = flow.sample(run.times)
        run.extra['q_gen_W_m3'] = heat.sample(run.times)
        measured_cov = cov(held)
        measured_mean = float(np.mean(held))
        std = run.std(config.warmup)
        stds.append(std)
        on_target &= abs(measured_cov - target) <= 0.1 and \
            abs(measured_mean - config.flow_mean) <= 1e-9
        cases[name] = run
        metrics[name] = {
            'temp_std_K': std,
            'flow_cov_pct': measured_cov,
            'flow_mean_kg_s': measured_mean,
            'target_cov_pct': target,
            'hull_clamps': float(run.meta['hull_clamps']),
        }

    flags = {
        'flow_targets_met': on_target,
        'std_nonincreasing': all(
            b <= a for a, b in zip(stds, stds[1:])),
        'last_case_smoother_than_first': stds[-1] < stds[0],
    }
    return StudyReport('flow', cases, metrics, flags,
                       _provenance(config, grid=grid.provenance))


class _PlantBackend:

    def __init__(self, plant: PlantModel, dt: float, t_in: float):
        self.integrator = PlantIntegrator(plant, dt)
        self.plant = plant
        self.vec = plant.pack(PlantState.prefilled(
            plant, plant.config.initial_temperature, t_in))

    def temperature(self) -> float:
        return self.plant.cell_average(self.vec)

    def step(self, p: SchedulePoint) -> float:
        self.vec = self.integrator.advance(self.vec, p)
        return self.temperature()


class _LpvBackend:

    def __init__(self, grid: LpvGrid, dt: float):
        self.grid = grid
        self.dt = dt
        self.state = LpvState.zero(grid)

    def temperature(self) -> float:
        return self.state.temperature(self.grid)

    def step(self, p: SchedulePoint) -> float:
        self.state, t_avg = step_lpv(self.grid, self.state, p, self.dt)
        return t_avg


def coupled_grid(config: StudyConfig,
                 plant: Optional[PlantModel] = None) -> LpvGrid:
    plant = plant or build_plant(config.plant)
    responses = extract_grid_responses(
        plant, config.q_axis, [config.coupled_m_dot],
        [config.coupled_t_in_k], config.extraction_t_end, config.dt,
        workers=config.workers)
    return fit_grid(responses, config.order, config.tie_modes, config.seed,
                    config.metrics, _grid_provenance(config))


def simulate_coupled(config: StudyConfig, thermal: str = 'lpv',
                     grid: Optional[LpvGrid] = None,
                     params: Optional[EcmParams] = None) -> SimulationResult:
    """Closed loop: the ECM heat drives the thermal model and the cell
    temperature is handed back to the ECM every `exchange_every` steps."""
    if params is None:
        params = load_ecm_params() if config.ecm_params is None else \
            load_ecm_params(config.ecm_params)
    dt = config.dt
    if thermal == 'plant':
        backend = _PlantBackend(build_plant(config.plant), dt,
                                config.coupled_t_in_k)
    elif thermal == 'lpv':
        backend = _LpvBackend(grid or coupled_grid(config), dt)
    else:
        raise DomainError(f'unknown thermal backend: {thermal}')

    current = config.coupled_current()
    times = time_base(config.coupled_t_end, dt)
    amps = current.sample(times)
    t_avg = np.empty_like(times)
    soc = np.empty_like(times)
    volts = np.empty_like(times)
    q_gen = np.zeros_like(times)

    t_avg[0] = backend.temperature()
    state = EcmState(config.initial_soc, temperature=t_avg[0])
    soc[0] = state.soc
    volts[0] = params.ocv_table(state.soc)
    n_saturated = 0
    for i in range(1, times.size):
        if (i - 1) % config.exchange_every == 0:
            state = state.with_temperature(t_avg[i - 1])
        state, volts[i] = step_ecm(params, state, amps[i - 1], dt)
        q_gen[i] = ecm_heat(params, state, amps[i - 1], volts[i])
        n_saturated += state.saturated
        t_avg[i] = backend.step(SchedulePoint(
            q_gen[i], config.coupled_m_dot, config.coupled_t_in_k))
        soc[i] = state.soc

    if n_saturated:
        logging.warning(f'SOC saturated in {n_saturated} coupled step(s)')
    return SimulationResult(
        times, t_avg,
        extra={'soc': soc, 'v': volts, 'current_a': amps,
               'q_gen_W_m3': q_gen},
        meta={'model': thermal, 'saturated_steps': n_saturated})


def run_ecm_coupled(config: StudyConfig, thermal: str = 'lpv',
                    grid: Optional[LpvGrid] = None,
                    params: Optional[EcmParams] = None,
                    reference: bool = True) -> StudyReport:
    """Coupled ECM run on the chosen thermal backend. With an LPV backend
    and `reference`, the plant coupled run is added and compared."""
    run = simulate_coupled(config, thermal, grid, params)
    cases = {thermal: run}
    metrics = {thermal: {
        'final_soc': float(run.extra['soc'][-1]),
        'max_T_avg_K': float(np.max(run.t_avg)),
        'max_q_gen_W_m3': float(np.max(run.extra['q_gen_W_m3'])),
        'saturated_steps': float(run.meta['saturated_steps']),
    }}
    flags = {'soc_saturated': run.meta['saturated_steps'] > 0}
    if thermal == 'lpv' and reference:
        ref = simulate_coupled(config, 'plant', params=params)
        max_abs, max_rel = metric_errors(run, ref)
        cases['plant'] = ref
        metrics[thermal]['max_abs_error_K'] = max_abs
        metrics[thermal]['max_rel_error_pct'] = max_rel
        flags['within_tolerance'] = max_rel < config.tolerance_pct
    return StudyReport('ecm-coupled', cases, metrics, flags,
                       _provenance(config))


class LtiFailureStudy(StudyBase):
    key = 'lti-failure'

    @classmethod
    def run(cls, config: StudyConfig) -> StudyReport:
        return scenario_lti_failure(config)


class LpvValidationStudy(StudyBase):
    key = 'lpv-validation'

    @classmethod
    def run(cls, config: StudyConfig) -> StudyReport:
        return scenario_lpv_validation(config)


class FlowStudy(StudyBase):
    key = 'flow'

    @classmethod
    def run(cls, config: StudyConfig) -> StudyReport:
        return scenario_flow_study(config)


class EcmCoupledStudy(StudyBase):
    key = 'ecm-coupled'

    @classmethod
    def run(cls, config: StudyConfig) -> StudyReport:
        return run_ecm_coupled(config)


STUDIES = (LtiFailureStudy, LpvValidationStudy, FlowStudy, EcmCoupledStudy)
