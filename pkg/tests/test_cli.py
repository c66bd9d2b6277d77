import asyncio
import json
import numpy as np
import pytest
from battrom import workers
from battrom.result import SimulationResult
from battrom.rom import StepResponse, design_matrix, load_model
from battrom.schedule import SchedulePoint, time_base
from battrom.start import main, main_cli


def error_line(capsys) -> dict:
    return json.loads(capsys.readouterr().err.strip().splitlines()[-1])


@pytest.fixture
def model_file(tmp_path, capsys):
    times = time_base(1500.0, 1.0)
    delta = 2e5 * design_matrix(times, np.array([300.0, 30.0])) @ \
        np.array([2e-5, 5e-6])
    resp = StepResponse(SchedulePoint.from_celsius(2e5, 2e-3, 5.0), 300.0,
                        times, delta)
    resp.to_csv(str(tmp_path / 'step.csv'))
    out = str(tmp_path / 'model.json')
    assert main(['fit', str(tmp_path / 'step.csv'), '--order', '2',
                 '--out', out]) == 0
    return out


def test_fit(model_file, capsys):
    model = load_model(model_file)
    assert np.allclose(model.taus, [300.0, 30.0], rtol=1e-4)
    assert json.loads(capsys.readouterr().out)['order'] == 2


def test_simulate_lti_and_compare(model_file, tmp_path, capsys):
    out = str(tmp_path / 'lti.csv')
    assert main(['simulate', '--model', 'lti', '--model-file', model_file,
                 '--q', '1e5', '--t-end', '100', '--out', out]) == 0
    run = SimulationResult.read_csv(out)
    assert len(run) == 201
    assert run.t_avg[-1] > run.t_avg[0]

    capsys.readouterr()
    assert main(['compare', out, out]) == 0
    assert json.loads(capsys.readouterr().out) == {
        'max_abs_error_K': 0.0, 'max_rel_error_pct': 0.0}


def test_simulate_plant_with_config(tmp_path):
    config = tmp_path / 'plant.json'
    config.write_text(json.dumps({'n_axial': 8, 'n_stack': 2}))
    out = str(tmp_path / 'plant.csv')
    assert main(['simulate', '--model', 'plant', '--config', str(config),
                 '--q', '5e5', '--t-in', '26.85', '--t-end', '20',
                 '--out', out]) == 0
    run = SimulationResult.read_csv(out)
    assert np.all(np.diff(run.t_avg) > 0.0)
    assert np.all(np.isfinite(run.t_out))


def test_simulate_ecm(tmp_path):
    out = str(tmp_path / 'ecm.csv')
    assert main(['simulate', '--model', 'ecm', '--i', '14.8', '--t-end',
                 '60', '--dt', '1', '--out', out]) == 0
    run = SimulationResult.read_csv(out)
    assert run.extra['soc'][-1] == pytest.approx(1.0 - 60.0 / 3600.0)
    assert np.all(run.extra['q_gen_W_m3'][1:] > 0.0)


def test_lpv_needs_model_file(tmp_path, capsys):
    assert main(['simulate', '--model', 'lpv',
                 '--out', str(tmp_path / 'x.csv')]) == 1
    assert error_line(capsys)['kind'] == 'domain'


def test_missing_input_file(tmp_path, capsys):
    assert main(['compare', str(tmp_path / 'a.csv'),
                 str(tmp_path / 'b.csv')]) == 1
    assert error_line(capsys)['kind'] == 'error'


def test_main_cli_closes_worker_loop(tmp_path, capsys, monkeypatch):
    fresh = asyncio.new_event_loop()
    monkeypatch.setattr(workers, 'loop', fresh)
    monkeypatch.setattr('sys.argv', ['battrom', 'compare',
                                     str(tmp_path / 'a.csv'),
                                     str(tmp_path / 'b.csv')])
    with pytest.raises(SystemExit) as exc:
        main_cli()
    assert exc.value.code == 1
    assert fresh.is_closed()
    assert error_line(capsys)['kind'] == 'error'


def test_bad_plant_config(tmp_path, capsys):
    config = tmp_path / 'plant.json'
    config.write_text(json.dumps({'n_axial': 1}))
    assert main(['simulate', '--model', 'plant', '--config', str(config),
                 '--out', str(tmp_path / 'x.csv')]) == 1
    error = error_line(capsys)
    assert error['kind'] == 'config'
    assert error['severity'] == 'high'
