import pytest
from battrom import harness
from battrom.harness import StudyConfig, validation_grid, \
    validation_responses
from battrom.plant import PlantConfig, build_plant, simulate_plant
from battrom.schedule import Profiles


@pytest.fixture(scope='session')
def study_config() -> StudyConfig:
    return StudyConfig()


@pytest.fixture(scope='session')
def plant(study_config):
    return build_plant(study_config.plant)


@pytest.fixture(scope='session')
def coarse_plant():
    return build_plant(PlantConfig(n_axial=8, n_stack=2))


@pytest.fixture(scope='session')
def validation_profiles(study_config) -> Profiles:
    return Profiles.from_heat(study_config.validation_heat(),
                              study_config.m_dot, study_config.t_in_k)


@pytest.fixture(scope='session')
def plant_run(study_config, plant, validation_profiles):
    return simulate_plant(plant, validation_profiles, study_config.t_end,
                          study_config.dt)


@pytest.fixture(scope='session')
def responses(study_config, plant):
    """Step responses along the validation q_gen axis (7 plant runs)."""
    return validation_responses(study_config, plant)


@pytest.fixture(scope='session')
def grid(study_config, responses):
    return validation_grid(study_config, responses)


@pytest.fixture(scope='session')
def flow_responses(study_config, plant):
    """Step responses at all 60 vertices of the default flow grid."""
    return harness.flow_responses(study_config, plant)


@pytest.fixture(scope='session')
def default_flow_grid(study_config, flow_responses):
    return harness.flow_grid(study_config, responses=flow_responses)
