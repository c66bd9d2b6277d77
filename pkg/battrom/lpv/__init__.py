from .grid import LpvGrid, ScheduledParams, DEFAULT_METRICS, METRICS, \
    to_metric
from .sim import LpvState, interpolate_model, step_lpv, simulate_lpv
from .build import build_lpv_grid, extract_grid_responses, fit_grid
from .store import save_grid, load_grid, GridPackage
