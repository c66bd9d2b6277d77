from .material import ThermalMaterial, ALUMINUM, WATER, BATTERY
from .config import PlantConfig, load_plant_config, config_hash
from .correlations import h_conv, reynolds, hydraulic_diameter
from .mesh import PlantModel, PlantState, build_plant
from .solver import (
    PlantIntegrator, step_plant, steady_state, simulate_plant, DEFAULT_DT)
from .gridstudy import grid_independence, GridIndependenceReport
