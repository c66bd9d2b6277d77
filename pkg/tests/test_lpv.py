import logging
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from battrom.exceptions import BuildError, ConfigError, DomainError, \
    FitError
from battrom.lpv import GridPackage, LpvGrid, LpvState, build_lpv_grid, \
    fit_grid, interpolate_model, load_grid, save_grid, simulate_lpv, \
    step_lpv, to_metric
from battrom.harness import metric_errors
from battrom.plant import simulate_plant
from battrom.rom import MIN_TAU_RATIO, FosterLtiModel, fit_foster, \
    simulate_lti
from battrom.schedule import Profile, Profiles, SchedulePoint

Q_AXIS = [1e5, 5e5, 5e6]
M_AXIS = [5e-4, 1e-3, 2e-3]
T_AXIS = [278.15, 293.15]


def synthetic_grid(metrics=('reciprocal', 'linear', 'linear'),
                   seed=3) -> LpvGrid:
    rng = np.random.default_rng(seed)
    shape = (len(Q_AXIS), len(M_AXIS), len(T_AXIS), 3)
    gains = rng.normal(0.0, 1e-5, shape)
    taus = np.sort(rng.uniform(1.0, 900.0, shape), axis=-1)[..., ::-1]
    return LpvGrid(Q_AXIS, M_AXIS, T_AXIS, gains, taus, 300.0,
                   metrics=metrics)


def enclosing(axis, c):
    axis = np.asarray(axis)
    if axis.size == 1:
        return slice(0, 1)
    i = int(np.clip(np.searchsorted(axis, c, side='right') - 1, 0,
                    axis.size - 2))
    return slice(i, i + 2)


def test_grid_shape(grid, study_config):
    assert grid.shape == (7, 1, 1)
    assert grid.order == 4
    assert list(grid.q_axis) == list(study_config.q_axis)
    assert grid.t0_temperature == 300.0
    # modes are shared along the single flow slice
    assert all(np.array_equal(grid.taus[0, 0, 0], grid.taus[i, 0, 0])
               for i in range(7))


def test_grid_rejects_unsorted_axis():
    with pytest.raises(DomainError):
        LpvGrid([5e5, 1e5], [1e-3], [280.0], np.ones((2, 1, 1, 1)),
                np.ones((2, 1, 1, 1)), 300.0)


def test_grid_rejects_zero_q_gen_for_default_metric():
    with pytest.raises(DomainError):
        LpvGrid([0.0, 1e5], [1e-3], [280.0], np.ones((2, 1, 1, 1)),
                np.ones((2, 1, 1, 1)), 300.0)


def test_vertex_parameters_are_exact():
    grid = synthetic_grid()
    for index in grid.indices():
        params = interpolate_model(grid, grid.vertex_point(index))
        assert np.allclose(params.gains, grid.gains[index], rtol=1e-12,
                           atol=0.0)
        assert np.allclose(params.taus, grid.taus[index], rtol=1e-14)
        assert not params.clamped


@pytest.mark.parametrize('metric, q_mid', [
    ('reciprocal', 2.0 / (1.0 / 1e5 + 1.0 / 5e5)),
    ('log', np.sqrt(1e5 * 5e5)),
    ('linear', 3e5),
])
def test_midpoint_rule(metric, q_mid):
    gains = np.array([[[[2e-5, 1e-6]]], [[[4e-5, -1e-6]]]])
    taus = np.array([[[[400.0, 10.0]]], [[[100.0, 40.0]]]])
    grid = LpvGrid([1e5, 5e5], [1e-3], [280.0], gains, taus, 300.0,
                   metrics=(metric, 'linear', 'linear'))
    params = interpolate_model(grid, SchedulePoint(q_mid, 1e-3, 280.0))
    assert np.allclose(params.gains, [3e-5, 0.0], atol=1e-18)
    assert np.allclose(params.taus, [200.0, 20.0], rtol=1e-12)


@settings(max_examples=1000, deadline=None)
@given(st.floats(5e4, 1e7), st.floats(1e-4, 3e-3), st.floats(270.0, 300.0))
def test_hull_boundedness(q, m, t):
    grid = synthetic_grid()
    params = interpolate_model(grid, SchedulePoint(q, m, t))
    cell = (enclosing(Q_AXIS, q), enclosing(M_AXIS, m),
            enclosing(T_AXIS, t))
    gains = grid.gains[cell].reshape(-1, grid.order)
    taus = grid.taus[cell].reshape(-1, grid.order)
    eps = 1e-12
    assert np.all(params.gains >= gains.min(axis=0) - eps * 1e-5)
    assert np.all(params.gains <= gains.max(axis=0) + eps * 1e-5)
    assert np.all(params.taus >= taus.min(axis=0) * (1.0 - eps))
    assert np.all(params.taus <= taus.max(axis=0) * (1.0 + eps))


def test_out_of_hull_is_clamped():
    grid = synthetic_grid()
    inside = interpolate_model(grid, SchedulePoint(5e6, 2e-3, 293.15))
    outside = interpolate_model(grid, SchedulePoint(5e7, 3e-3, 310.0))
    assert outside.clamped and not inside.clamped
    assert np.array_equal(outside.gains, inside.gains)


def test_interpolation_is_continuous():
    grid = synthetic_grid()

    def max_jump(n):
        qs = np.linspace(1e5, 5e6, n)
        values = np.array([interpolate_model(
            grid, SchedulePoint(q, 7e-4, 285.0)).gains for q in qs])
        return np.max(np.abs(np.diff(values, axis=0)))

    coarse, fine = max_jump(50), max_jump(500)
    assert fine < coarse
    assert fine <= 0.2 * np.ptp(grid.gains)


def test_constant_scheduling_at_vertex_matches_lti(grid):
    for index in [(0, 0, 0), (3, 0, 0), (6, 0, 0)]:
        p = grid.vertex_point(index)
        heat = Profile.constant(p.q_gen)
        lpv = simulate_lpv(grid, Profiles.constant(p), 600.0)
        lti = simulate_lti(grid.vertex(index), heat, t_end=600.0)
        assert np.allclose(lpv.t_avg, lti.t_avg, rtol=1e-12, atol=1e-9)
        assert lpv.meta['hull_clamps'] == 0


def test_single_vertex_grid_is_lti():
    model = FosterLtiModel([2e-5, -3e-6], [500.0, 20.0],
                           SchedulePoint(5e5, 1e-3, 290.0), 300.0)
    grid = LpvGrid.from_models([5e5], [1e-3], [290.0],
                               np.array([[[model]]], dtype=object))
    heat = Profile([0.0, 60.0, 200.0], [1e5, 3e6, 0.0])
    profiles = Profiles(heat, Profile([0.0, 100.0], [1e-3, 2e-3]),
                        Profile([0.0, 150.0], [290.0, 280.0]))
    lpv = simulate_lpv(grid, profiles, 400.0)
    lti = simulate_lti(model, heat, t_end=400.0)
    assert np.allclose(lpv.t_avg, lti.t_avg, rtol=1e-12, atol=1e-9)
    assert lpv.meta['hull_clamps'] > 0


def test_zero_input_fixed_point():
    grid = synthetic_grid()
    state = LpvState.zero(grid)
    for _ in range(10):
        state, t_avg = step_lpv(grid, state, SchedulePoint(0.0, 1e-3, 280.0),
                                0.5)
        assert t_avg == grid.t0_temperature


def test_step_rejects_bad_dt():
    grid = synthetic_grid()
    with pytest.raises(DomainError):
        step_lpv(grid, LpvState.zero(grid), SchedulePoint(1e5, 1e-3, 280.0),
                 0.0)


def test_switching_vertices_keeps_trajectory_continuous(grid, plant,
                                                        study_config):
    heat = Profile([0.0, 300.0], [1e5, 5e6])
    profiles = Profiles.from_heat(heat, study_config.m_dot,
                                  study_config.t_in_k)
    lpv = simulate_lpv(grid, profiles, 400.0)
    ref = simulate_plant(plant, profiles, 400.0, 0.5)
    n = 601  # first sample driven by the new vertex
    lpv_jump = abs(lpv.t_avg[n] - lpv.t_avg[n - 1])
    plant_jump = abs(ref.t_avg[n] - ref.t_avg[n - 1])
    assert lpv_jump <= 2.0 * plant_jump + 0.5


def test_validation_error_below_four_percent(grid, plant_run,
                                             validation_profiles,
                                             study_config):
    lpv = simulate_lpv(grid, validation_profiles, study_config.t_end)
    _, max_rel = metric_errors(lpv, plant_run)
    assert max_rel < study_config.tolerance_pct
    assert lpv.meta['hull_clamps'] == 0


def test_build_small_grid(coarse_plant):
    grid = build_lpv_grid(coarse_plant, [1e5, 5e6], [1e-3, 2e-3],
                          [283.15], order=3, t_end=1500.0, dt=1.0)
    assert grid.shape == (2, 2, 1)
    assert grid.provenance['plant_config_hash'] == \
        coarse_plant.config.config_hash()
    assert grid.provenance['t_end'] == 1500.0
    assert np.array_equal(grid.taus[0, 0, 0], grid.taus[1, 0, 0])
    assert not np.array_equal(grid.taus[0, 0, 0], grid.taus[0, 1, 0])


def test_build_reports_failing_vertex(coarse_plant, monkeypatch):
    import battrom.lpv.build as build

    def failing(*args, **kwargs):
        raise FitError('no convergence')

    monkeypatch.setattr(build, 'fit_foster_joint', failing)
    with pytest.raises(BuildError) as info:
        build_lpv_grid(coarse_plant, [1e5], [1e-3, 2e-3], [283.15],
                       order=2, t_end=200.0, dt=1.0)
    assert info.value.vertex == (0, 0, 0)


def test_build_pads_a_collapsing_slice(coarse_plant, monkeypatch, caplog):
    import battrom.lpv.build as build
    calls = []

    def collapsing(responses, order, seed, **kwargs):
        calls.append(seed)
        return [fit_foster(r, taus=[400.0, 20.0]) for r in responses]

    monkeypatch.setattr(build, 'fit_foster_joint', collapsing)
    with caplog.at_level(logging.WARNING):
        grid = build_lpv_grid(coarse_plant, [1e5, 5e6], [2e-3], [283.15],
                              order=3, t_end=300.0, dt=1.0)
    assert calls == [0, 1, 2, 3]
    assert grid.order == 3
    assert np.allclose(grid.taus[0, 0, 0, :2], [400.0, 20.0])
    assert grid.taus[0, 0, 0, 2] < 20.0
    assert 'padding order 2 to 3' in caplog.text


def test_default_flow_grid(default_flow_grid, study_config):
    grid = default_flow_grid
    assert grid.shape == (3, 5, 4)
    assert grid.order == study_config.order
    assert list(grid.m_axis) == list(study_config.flow_m_axis)
    for j in range(5):
        assert all(np.array_equal(grid.taus[0, j, 0], grid.taus[i, j, k])
                   for i in range(3) for k in range(4))
    assert np.all(grid.taus[..., :-1] / grid.taus[..., 1:] >=
                  MIN_TAU_RATIO - 1e-9)


def test_q_metrics_on_validation_scenario(responses, plant_run,
                                          validation_profiles, study_config):
    errors = {}
    for metric in ('log', 'reciprocal'):
        grid = fit_grid(responses, study_config.order,
                        metrics=(metric, 'linear', 'linear'))
        lpv = simulate_lpv(grid, validation_profiles, study_config.t_end)
        errors[metric] = metric_errors(lpv, plant_run)[1]
    # gains of the affine plant are affine in 1/q_gen; log weights
    # overshoot the cooling transient between decade-spaced vertices
    assert errors['reciprocal'] < study_config.tolerance_pct
    assert errors['log'] > errors['reciprocal']


@pytest.mark.parametrize('suffix', ['.json', '.mpk'])
def test_grid_file(tmp_path, suffix):
    grid = synthetic_grid()
    path = str(tmp_path / f'grid{suffix}')
    save_grid(grid, path)
    again = load_grid(path)
    assert np.array_equal(again.gains, grid.gains)
    assert np.array_equal(again.taus, grid.taus)
    assert np.array_equal(again.t_axis, grid.t_axis)
    assert again.metrics == grid.metrics


def test_grid_package_checkbit():
    data = GridPackage.make({'format': 'x'}).to_bytes()
    corrupt = bytearray(data)
    corrupt[6] ^= 0xff
    with pytest.raises(ConfigError):
        GridPackage.from_bytes(bytes(corrupt))
    with pytest.raises(ConfigError):
        GridPackage.from_bytes(data[:-1])
    assert GridPackage.from_bytes(data).read_data() == {'format': 'x'}


def test_grid_document_validation(tmp_path):
    import json
    grid = synthetic_grid()
    path = tmp_path / 'grid.json'
    save_grid(grid, str(path))
    doc = json.loads(path.read_text())
    doc['vertices'].pop()
    path.write_text(json.dumps(doc))
    with pytest.raises(ConfigError):
        load_grid(str(path))
    doc['version'] = 99
    path.write_text(json.dumps(doc))
    with pytest.raises(ConfigError):
        load_grid(str(path))


def test_metric_keeps_order():
    values = np.array([1e5, 5e5, 5e6])
    for metric in ('linear', 'log', 'reciprocal'):
        assert np.all(np.diff(to_metric(values, metric)) > 0.0)
