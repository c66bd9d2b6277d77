import logging
import numpy as np
import pytest
from battrom.exceptions import DomainError
from battrom.rom import MIN_TAU_RATIO, FosterLtiModel, StepResponse, \
    design_matrix, fit_foster, fit_foster_joint, load_model, pad_order, \
    relative_fit_error, save_model, simulate_lti
from battrom.schedule import Profile, SchedulePoint, time_base

OP = SchedulePoint.from_celsius(1e5, 2e-3, 5.0)


def synthetic(gains, taus, q=1e5, t_end=3000.0, dt=0.5) -> StepResponse:
    times = time_base(t_end, dt)
    delta = q * design_matrix(times, np.asarray(taus)) @ np.asarray(gains)
    return StepResponse(OP.with_q(q), 300.0, times, delta)


@pytest.mark.parametrize('gains, taus', [
    ([1.5e-5], [120.0]),
    ([2e-5, 1e-5], [600.0, 40.0]),
    ([3e-5, -1e-5], [500.0, 50.0]),
])
def test_recovers_synthetic_parameters(gains, taus):
    model = fit_foster(synthetic(gains, taus), order=len(taus))
    assert np.allclose(model.taus, taus, rtol=1e-4)
    assert np.allclose(model.gains, gains, rtol=1e-4)
    assert model.fit_rms < 1e-9


def test_fit_is_scale_free():
    a = fit_foster(synthetic([2e-5, 1e-5], [600.0, 40.0], q=1e5), order=2)
    b = fit_foster(synthetic([2e-5, 1e-5], [600.0, 40.0], q=5e7), order=2)
    assert np.allclose(a.taus, b.taus, rtol=1e-6)
    assert np.allclose(a.gains, b.gains, rtol=1e-6)


def test_fit_is_deterministic():
    resp = synthetic([2e-5, 1e-5], [600.0, 40.0])
    a = fit_foster(resp, order=2, seed=7)
    b = fit_foster(resp, order=2, seed=7)
    assert np.array_equal(a.taus, b.taus)
    assert np.array_equal(a.gains, b.gains)


def test_fixed_time_constants_solve_gains_only():
    resp = synthetic([2e-5, 1e-5], [600.0, 40.0])
    model = fit_foster(resp, taus=[40.0, 600.0])
    assert list(model.taus) == [600.0, 40.0]
    assert np.allclose(model.gains, [2e-5, 1e-5], rtol=1e-9)


def test_joint_fit_shares_time_constants():
    a = synthetic([2e-5, 1e-5], [600.0, 40.0])
    b = synthetic([-5e-6, 3e-6], [600.0, 40.0], q=5e6)
    models = fit_foster_joint([a, b], order=2)
    assert np.array_equal(models[0].taus, models[1].taus)
    assert np.allclose(models[0].taus, [600.0, 40.0], rtol=1e-4)
    assert np.allclose(models[1].gains, [-5e-6, 3e-6], rtol=1e-4)


def test_joint_fit_needs_identical_time_bases():
    a = synthetic([1e-5], [100.0])
    b = synthetic([1e-5], [100.0], t_end=2000.0)
    with pytest.raises(DomainError):
        fit_foster_joint([a, b], order=1)


def test_fitted_time_constants_stay_apart():
    # a double pole, which free time constants would chase into a collapse
    times = time_base(3000.0, 0.5)
    tau = 80.0
    delta = 1e5 * 2e-5 * (1.0 - (1.0 + times / tau) * np.exp(-times / tau))
    resp = StepResponse(OP, 300.0, times, delta)
    model = fit_foster(resp, order=3)
    assert model.order == 3
    assert np.all(model.taus[:-1] / model.taus[1:] >= MIN_TAU_RATIO - 1e-9)
    assert relative_fit_error(model, resp) < 0.01


def test_given_time_constants_collapse_with_warning(caplog):
    resp = synthetic([2e-5, 1e-5], [600.0, 40.0])
    with caplog.at_level(logging.WARNING):
        model = fit_foster(resp, taus=[600.0, 601.0, 40.0])
    assert model.order == 2
    assert 'order reduced from 3 to 2' in caplog.text
    assert model.fit_rms < 1e-7


def test_pad_order_keeps_response():
    model = FosterLtiModel([2e-5, 1e-5], [600.0, 40.0], OP, 300.0)
    padded = pad_order(model, 4)
    assert padded.order == 4
    assert np.all(np.diff(padded.taus) < 0.0)
    assert list(padded.gains[2:]) == [0.0, 0.0]
    t = time_base(900.0, 0.5)
    assert np.array_equal(padded.step_response(t), model.step_response(t))
    assert pad_order(padded, 4) is padded


def test_relative_fit_error_uses_final_value():
    resp = synthetic([2e-5, -1.5e-5], [600.0, 40.0])
    final = abs(resp.normalized[-1])
    model = FosterLtiModel([2e-5, -1.5e-5], [600.0, 40.0], OP, 300.0,
                           fit_rms=1e-8)
    assert relative_fit_error(model, resp) == pytest.approx(1e-8 / final)
    flat = StepResponse(OP, 300.0, resp.times, np.zeros_like(resp.times))
    assert relative_fit_error(model, flat) == float('inf')


def test_too_few_samples():
    with pytest.raises(DomainError):
        fit_foster(synthetic([1e-5], [1.0], t_end=2.0), order=4)


def test_model_rejects_unsorted_time_constants():
    with pytest.raises(DomainError):
        FosterLtiModel([1.0, 1.0], [10.0, 100.0], OP, 300.0)


def test_model_file(tmp_path):
    model = fit_foster(synthetic([2e-5, 1e-5], [600.0, 40.0]), order=2)
    path = str(tmp_path / 'model.json')
    save_model(model, path)
    again = load_model(path)
    assert np.array_equal(again.taus, model.taus)
    assert np.array_equal(again.gains, model.gains)
    assert again.op == model.op


def test_response_csv(tmp_path):
    resp = synthetic([2e-5], [100.0], t_end=50.0)
    path = str(tmp_path / 'step.csv')
    resp.to_csv(path)
    again = StepResponse.read_csv(path)
    assert again.op == resp.op
    assert again.t0_temperature == 300.0
    assert np.array_equal(again.delta_t, resp.delta_t)


def test_lti_replays_step_response():
    model = FosterLtiModel([2e-5, 1e-5], [600.0, 40.0], OP, 300.0)
    result = simulate_lti(model, Profile.constant(1e5), t_end=900.0)
    expected = 300.0 + 1e5 * model.step_response(result.times)
    assert np.allclose(result.t_avg, expected, rtol=0.0, atol=1e-9)


def test_lti_zero_input():
    model = FosterLtiModel([2e-5, 1e-5], [600.0, 40.0], OP, 300.0)
    result = simulate_lti(model, Profile.constant(0.0), t_end=100.0)
    assert np.all(result.t_avg == 300.0)


def test_lti_superposition():
    model = FosterLtiModel([2e-5, -4e-6], [600.0, 40.0], OP, 300.0)
    q1 = Profile([0.0, 100.0, 300.0], [1e5, 5e5, 0.0])
    q2 = Profile([0.0, 250.0], [2e6, 1e4])
    both = Profile([0.0, 100.0, 250.0, 300.0],
                   [2.1e6, 2.5e6, 5.1e5, 1e4])
    a = simulate_lti(model, q1, t_end=600.0).t_avg - 300.0
    b = simulate_lti(model, q2, t_end=600.0).t_avg - 300.0
    c = simulate_lti(model, both, t_end=600.0).t_avg - 300.0
    assert np.allclose(a + b, c, rtol=1e-9, atol=1e-9)


def test_plant_step_responses(responses):
    low = responses[1, 0, 0]
    high = responses[4, 0, 0]
    assert low.op.q_gen == 1e5 and high.op.q_gen == 5e6
    # cooling dominates at low heat generation from the first sample on
    assert np.all(low.delta_t[1:401] < 0.0)
    assert np.all(np.diff(low.delta_t[:41]) < 0.0)
    assert low.delta_t[-1] < 0.0
    assert np.all(np.diff(high.delta_t) > -1e-12)
    assert abs(high.final_slope) < 1e-4


def test_plant_responses_fit_at_order_four(responses):
    for resp in responses.flat:
        model = fit_foster(resp, order=4)
        assert model.order == 4
        assert relative_fit_error(model, resp) < 0.01


def test_flow_grid_responses_fit_at_order_four(flow_responses):
    assert flow_responses.shape == (3, 5, 4)
    for resp in flow_responses.flat:
        model = fit_foster(resp, order=4)
        assert model.order == 4
        assert relative_fit_error(model, resp) < 0.01, resp.op


def test_high_heat_lti_misses_early_cooling(responses, plant_run,
                                            study_config):
    model = fit_foster(responses[4, 0, 0], order=4)
    run = simulate_lti(model, study_config.validation_heat(),
                       t_end=study_config.t_end)
    assert run.window_slope(0.0, 200.0) >= 0.0
    assert plant_run.window_slope(0.0, 200.0) < 0.0
    assert np.all(np.diff(plant_run.window(0.0, 200.0)) < 0.0)
