import argparse
import json
import logging
import numpy as np
import sys
from typing import List, Optional
from .ecm import EcmState, load_ecm_params, simulate_ecm
from .exceptions import DomainError, RomException
from .harness import StudyConfig, load_study_config, metric_errors, \
    study_runner
from .logger import setup_logger, set_log_level
from .lpv import build_lpv_grid, load_grid, save_grid, simulate_lpv
from .plant import DEFAULT_DT, PlantConfig, build_plant, \
    grid_independence, load_plant_config, simulate_plant
from .result import SimulationResult
from .rom import StepResponse, extract_step_response, fit_foster, \
    load_model, relative_fit_error, save_model, simulate_lti
from .schedule import Profile, Profiles, SchedulePoint
from .units import celsius_to_kelvin
from .version import __version__
from .workers import close as close_workers


def _plant_config(args) -> PlantConfig:
    return load_plant_config(args.config) if args.config else \
        load_plant_config()


def _dt(args) -> float:
    return args.dt or DEFAULT_DT


def _dump(data: dict):
    print(json.dumps(data, indent=2, sort_keys=True))


def _heat(args) -> Profile:
    if args.heat:
        return Profile.read_csv(args.heat)
    return Profile.constant(args.q)


def _flow(args) -> Optional[Profile]:
    return Profile.read_csv(args.flow) if args.flow else None


def cmd_extract(args):
    plant = build_plant(_plant_config(args))
    op = SchedulePoint.from_celsius(args.q, args.m_dot, args.t_in)
    resp = extract_step_response(plant, op, args.t_end or 3000.0, _dt(args))
    resp.to_csv(args.out)
    logging.info(f'step response written to {args.out}')


def cmd_fit(args):
    resp = StepResponse.read_csv(args.response)
    model = fit_foster(resp, args.order, args.seed)
    save_model(model, args.out)
    _dump({'order': model.order, 'taus': model.taus.tolist(),
           'gains': model.gains.tolist(), 'fit_rms': model.fit_rms,
           'relative_fit_error': relative_fit_error(model, resp)})


def cmd_grid_build(args):
    plant = build_plant(_plant_config(args))
    grid = build_lpv_grid(
        plant, args.q_axis, args.m_axis,
        [celsius_to_kelvin(t) for t in args.t_axis],
        order=args.order, t_end=args.t_end or 3000.0, dt=_dt(args),
        tie_modes=not args.independent_modes, seed=args.seed,
        metrics=(args.q_metric, 'linear', 'linear'))
    save_grid(grid, args.out)
    logging.info(f'LPV grid {grid.shape} written to {args.out}')


def cmd_simulate(args):
    t_end = args.t_end or 1800.0
    if args.model in ('lti', 'lpv') and not args.model_file:
        raise DomainError(
            f'--model-file is required for --model {args.model}')
    if args.model == 'ecm':
        params = load_ecm_params(args.params) if args.params else \
            load_ecm_params()
        current = Profile.read_csv(args.current) if args.current else \
            Profile.constant(args.i)
        data = simulate_ecm(params, EcmState(args.soc), current, t_end,
                            _dt(args), celsius_to_kelvin(args.t_cell))
        times = data.pop('t_s')
        result = SimulationResult(
            times, np.full_like(times, celsius_to_kelvin(args.t_cell)),
            extra=data)
    elif args.model == 'plant':
        profiles = Profiles.from_heat(_heat(args), args.m_dot,
                                      celsius_to_kelvin(args.t_in),
                                      _flow(args))
        result = simulate_plant(build_plant(_plant_config(args)), profiles,
                                t_end, _dt(args))
        logging.info(f'energy ledger: {result.meta["energy"]}')
    elif args.model == 'lti':
        result = simulate_lti(load_model(args.model_file), _heat(args),
                              t_end=t_end, dt=_dt(args))
    else:
        profiles = Profiles.from_heat(_heat(args), args.m_dot,
                                      celsius_to_kelvin(args.t_in),
                                      _flow(args))
        result = simulate_lpv(load_grid(args.model_file), profiles, t_end,
                              _dt(args))
    result.to_csv(args.out)
    logging.info(f'trajectory written to {args.out}')


def cmd_compare(args):
    rom = SimulationResult.read_csv(args.rom)
    plant = SimulationResult.read_csv(args.plant)
    max_abs, max_rel = metric_errors(rom, plant)
    _dump({'max_abs_error_K': max_abs, 'max_rel_error_pct': max_rel})


def cmd_study(args):
    config: StudyConfig = load_study_config(args.config)
    changes = {'seed': args.seed}
    if args.dt:
        changes['dt'] = args.dt
    if args.t_end:
        changes['t_end'] = args.t_end
    config = config.replace(**changes)
    report, error = study_runner.run(args.name, config, args.out)
    if error:
        raise RomException(error['error'])
    _dump({'study': report.name, 'flags': report.flags})


def cmd_grid_independence(args):
    report = grid_independence(_plant_config(args), tuple(args.levels))
    _dump(report.to_dict())


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='plant (or study) config JSON')
    common.add_argument('--dt', type=float, default=None)
    common.add_argument('--t-end', type=float, default=None)
    common.add_argument('--seed', type=int, default=0)
    common.add_argument('--log-level', default=None,
                        choices=('debug', 'info', 'warning', 'error'))

    drive = argparse.ArgumentParser(add_help=False)
    drive.add_argument('--q', type=float, default=5e5,
                       help='constant heat generation, W/m3')
    drive.add_argument('--heat', help='heat generation profile CSV')
    drive.add_argument('--m-dot', type=float, default=2e-3)
    drive.add_argument('--flow', help='flow rate profile CSV')
    drive.add_argument('--t-in', type=float, default=5.0,
                       help='inlet temperature, C')

    parser = argparse.ArgumentParser(
        prog='battrom',
        description='Battery thermal reduced order models')
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('extract', parents=[common, drive],
                       help='plant step response to CSV')
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser('fit', parents=[common],
                       help='Foster model from a step response CSV')
    p.add_argument('response')
    p.add_argument('--order', type=int, default=4)
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser('grid', help='LPV grid tools')
    grid_sub = p.add_subparsers(dest='grid_command', required=True)
    p = grid_sub.add_parser('build', parents=[common],
                            help='extract and fit an LPV grid')
    p.add_argument('--q-axis', type=float, nargs='+', required=True)
    p.add_argument('--m-axis', type=float, nargs='+', required=True)
    p.add_argument('--t-axis', type=float, nargs='+', required=True,
                   help='inlet temperatures, C')
    p.add_argument('--order', type=int, default=4)
    p.add_argument('--q-metric', default='log',
                   choices=('linear', 'log', 'reciprocal'))
    p.add_argument('--independent-modes', action='store_true')
    p.add_argument('--out', required=True, help='.json or .mpk')
    p.set_defaults(func=cmd_grid_build)

    p = sub.add_parser('simulate', parents=[common, drive],
                       help='trajectory of one model to CSV')
    p.add_argument('--model', required=True,
                   choices=('plant', 'lti', 'lpv', 'ecm'))
    p.add_argument('--model-file', help='Foster model or LPV grid file')
    p.add_argument('--params', help='ECM parameter JSON')
    p.add_argument('--current', help='ECM current profile CSV')
    p.add_argument('--i', type=float, default=0.0,
                   help='constant ECM current, A (discharge > 0)')
    p.add_argument('--soc', type=float, default=1.0)
    p.add_argument('--t-cell', type=float, default=25.0,
                   help='ECM cell temperature, C')
    p.add_argument('--out', required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser('compare', parents=[common],
                       help='error metrics of a ROM trajectory')
    p.add_argument('rom')
    p.add_argument('plant')
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser('study', parents=[common], help='run a study')
    p.add_argument('name', choices=study_runner.keys)
    p.add_argument('--out', default=None,
                   help='output directory (JSON on stdout when omitted)')
    p.set_defaults(func=cmd_study)

    p = sub.add_parser('grid-independence', parents=[common],
                       help='plant mesh refinement study')
    p.add_argument('--levels', type=int, nargs='+', default=[1, 2, 4])
    p.set_defaults(func=cmd_grid_independence)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    setup_logger()
    if args.log_level:
        set_log_level(args.log_level)
    logging.info(f'battrom v{__version__}: {args.command}')

    try:
        args.func(args)
    except RomException as e:
        print(json.dumps(e.to_dict()), file=sys.stderr)
        return 1
    except (OSError, ValueError) as e:
        msg = str(e) or type(e).__name__
        print(json.dumps(RomException(msg).to_dict()), file=sys.stderr)
        return 1
    return 0


def main_cli():
    try:
        code = main()
    finally:
        close_workers()
    sys.exit(code)
