import numpy as np
import pytest
from battrom.exceptions import ConfigError, DomainError, StepError
from battrom.harness import FLOW_M_AXIS
from battrom.plant import ALUMINUM, BATTERY, WATER, PlantConfig, \
    PlantIntegrator, PlantState, build_plant, grid_independence, h_conv, \
    hydraulic_diameter, load_plant_config, reynolds, simulate_plant, \
    steady_state, step_plant
from battrom.schedule import Profile, Profiles, SchedulePoint


def test_default_config_file_matches_defaults():
    config = load_plant_config()
    assert config.to_dict() == PlantConfig().to_dict()
    assert config.config_hash() == PlantConfig().config_hash()


def test_config_rejects():
    with pytest.raises(ConfigError):
        PlantConfig(channel_gap=0.0)
    with pytest.raises(ConfigError):
        PlantConfig(n_axial=1)
    with pytest.raises(ConfigError):
        PlantConfig.from_dict({'n_axial': 10, 'mesh': 'fine'})


def test_config_hash_changes_with_geometry():
    assert PlantConfig().config_hash() != \
        PlantConfig(plate_thickness=0.004).config_hash()


def test_material_properties():
    assert BATTERY.volumetric_heat_capacity == 2.5e5
    assert ALUMINUM.rho == 2719.0
    assert WATER.cp == 4128.0


def test_film_coefficient():
    config = PlantConfig()
    assert hydraulic_diameter(config) == pytest.approx(0.004)
    assert h_conv(config) == pytest.approx(8.23 * 0.6 / 0.004)
    # fully developed laminar flow
    assert h_conv(config, 1e-4) == h_conv(config, 3e-3)


def test_reynolds_hand_value():
    # 1.5e-3 kg/s per plate, D_h 4 mm, flow area 2e-4 m2
    assert reynolds(PlantConfig(), 3e-3) == \
        pytest.approx(1.5e-3 * 0.004 / (2e-4 * 1.003e-3))


@pytest.mark.parametrize('m_dot', FLOW_M_AXIS)
def test_flow_stays_laminar(m_dot):
    assert reynolds(PlantConfig(), m_dot) < 200.0


def test_variable_viscosity_lowers_reynolds_in_cold_water():
    config = PlantConfig(variable_viscosity=True)
    assert reynolds(config, 2e-3, 278.15) < reynolds(config, 2e-3, 320.0)


def test_reynolds_rejects_negative_flow():
    with pytest.raises(DomainError):
        reynolds(PlantConfig(), -1e-3)


def test_mesh_layout(plant):
    config = plant.config
    assert plant.n_nodes == config.n_axial * (config.n_stack + 2)
    assert plant.cell_volume == pytest.approx(0.5 * config.cell_volume)
    assert plant.flow_fraction == pytest.approx(0.5)
    # conduction links conserve energy: rows of the Laplacian sum to zero
    assert np.allclose(plant.conductance @ np.ones(plant.n_nodes), 0.0)


def test_full_stack_layout():
    model = build_plant(PlantConfig(symmetric=False, n_axial=6))
    assert model.cell_volume == pytest.approx(PlantConfig().cell_volume)
    assert model.flow_fraction == pytest.approx(1.0)
    assert model.plate_index.shape == (2, 6)


def test_equilibrium_is_a_fixed_point(plant):
    state = PlantState.uniform(plant, 278.15)
    p = SchedulePoint(0.0, 2e-3, 278.15)
    new = step_plant(plant, state, p)
    for a in (new.t_cell, new.t_plate, new.t_coolant):
        assert np.allclose(a, 278.15, atol=1e-9, rtol=0.0)


def test_adiabatic_cell_heats_at_two_kelvin_per_second():
    model = build_plant(PlantConfig(adiabatic_cell=True, n_axial=6))
    profiles = Profiles.constant(SchedulePoint(5e5, 2e-3, 278.15))
    result = simulate_plant(model, profiles, 10.0, 0.5)
    rate = np.diff(result.t_avg) / 0.5
    assert np.allclose(rate, 2.0, rtol=1e-3)


def test_steady_outlet_rise(plant):
    p = SchedulePoint(1e6, 2e-3, 278.15)
    vec = plant.pack(steady_state(plant, p))
    rise = plant.outlet_temperature(vec) - p.t_in
    expected = p.q_gen * plant.config.cell_volume / (p.m_dot * WATER.cp)
    assert rise == pytest.approx(expected, rel=1e-3)


def test_steady_state_needs_flow(plant):
    with pytest.raises(DomainError):
        steady_state(plant, SchedulePoint(1e6, 0.0, 278.15))


def test_transient_reaches_steady_state(coarse_plant):
    p = SchedulePoint(5e5, 2e-3, 288.15)
    result = simulate_plant(coarse_plant, Profiles.constant(p), 4000.0, 1.0)
    steady = coarse_plant.cell_average(
        coarse_plant.pack(steady_state(coarse_plant, p)))
    assert result.t_avg[-1] == pytest.approx(steady, abs=1e-3)


def test_energy_ledger(plant_run):
    energy = plant_run.meta['energy']
    assert energy['generated_J'] > 0.0
    assert energy['relative_residual'] < 1e-3


def test_energy_ledger_with_varying_flow(coarse_plant):
    profiles = Profiles(Profile([0.0, 300.0], [2e6, 3e5]),
                        Profile([0.0, 150.0, 450.0], [1e-3, 3e-3, 5e-4]),
                        Profile([0.0, 200.0], [288.15, 278.15]))
    result = simulate_plant(coarse_plant, profiles, 600.0, 0.5)
    assert result.meta['energy']['relative_residual'] < 1e-3


def test_cold_inlet_cools_cell_at_low_heat(plant_run):
    early = plant_run.window(0.0, 200.0)
    assert early.size == 401
    assert np.all(np.diff(early) < 0.0)


def test_default_start_fills_channels_with_inlet_water(coarse_plant):
    profiles = Profiles.constant(SchedulePoint(0.0, 2e-3, 278.15))
    start = PlantState.prefilled(coarse_plant, 300.0, 278.15)
    assert np.all(start.t_coolant == 278.15)
    assert np.all(start.t_cell == 300.0)
    assert np.all(start.t_plate == 300.0)
    result = simulate_plant(coarse_plant, profiles, 5.0, 0.5)
    again = simulate_plant(coarse_plant, profiles, 5.0, 0.5, start)
    assert np.array_equal(result.t_avg, again.t_avg)
    assert result.t_avg[0] == pytest.approx(300.0, abs=1e-9)
    assert np.all(np.diff(result.t_avg) < 0.0)


def test_maximum_principle_without_heat(coarse_plant):
    profiles = Profiles.constant(SchedulePoint(0.0, 1e-3, 278.15))
    initial = PlantState.uniform(coarse_plant, 300.0)
    result = simulate_plant(coarse_plant, profiles, 600.0, 0.5, initial)
    assert np.all(result.t_avg <= 300.0 + 1e-9)
    assert np.all(result.t_avg >= 278.15 - 1e-9)


def test_symmetric_half_matches_full_stack():
    half = build_plant(PlantConfig(n_axial=6, n_stack=2))
    full = build_plant(PlantConfig(n_axial=6, n_stack=2, symmetric=False))
    profiles = Profiles.constant(SchedulePoint(1e6, 2e-3, 283.15))
    a = simulate_plant(half, profiles, 300.0, 0.5)
    b = simulate_plant(full, profiles, 300.0, 0.5)
    assert np.allclose(a.t_avg, b.t_avg, atol=1e-8)


def test_explicit_and_semi_implicit_schemes_converge(coarse_plant):
    limit = PlantIntegrator(coarse_plant, 1.0, 'explicit').stability_limit(
        2e-3)
    profiles = Profiles.constant(SchedulePoint(1e6, 2e-3, 283.15))

    def gap(dt):
        a = simulate_plant(coarse_plant, profiles, 60.0, dt,
                           scheme='explicit')
        b = simulate_plant(coarse_plant, profiles, 60.0, dt)
        assert a.meta['energy']['relative_residual'] < 1e-3
        return np.max(np.abs(a.t_avg - b.t_avg))

    coarse = gap(0.1 * limit)
    fine = gap(0.05 * limit)
    # forward and backward Euler on one operator: the gap is first order
    assert fine == pytest.approx(0.5 * coarse, rel=0.2)
    assert fine < 0.05


def test_explicit_scheme_rejects_large_step(coarse_plant):
    integrator = PlantIntegrator(coarse_plant, 1.0, 'explicit')
    limit = integrator.stability_limit(2e-3)
    state = PlantState.uniform(coarse_plant, 300.0)
    with pytest.raises(StepError) as info:
        step_plant(coarse_plant, state, SchedulePoint(1e5, 2e-3, 280.0),
                   dt=2.0 * limit, scheme='explicit')
    assert info.value.suggested_dt < limit


def test_deterministic(coarse_plant):
    profiles = Profiles.constant(SchedulePoint(1e6, 2e-3, 283.15))
    a = simulate_plant(coarse_plant, profiles, 100.0, 0.5)
    b = simulate_plant(coarse_plant, profiles, 100.0, 0.5)
    assert np.array_equal(a.t_avg, b.t_avg)


def test_grid_independence():
    report = grid_independence(PlantConfig(), (1, 2, 4))
    assert [lv.factor for lv in report.levels] == [1, 2, 4]
    assert report.levels[-1].change_pct < 0.5
    assert report.converged
    assert report.to_dict()['levels'][0]['change_pct'] == 0.0


def test_grid_independence_needs_two_levels():
    with pytest.raises(DomainError):
        grid_independence(PlantConfig(), (1,))
