from .tables import Table1D, Table2D
from .params import EcmParams, load_ecm_params
from .model import (
    EcmState, ocv, entropy_coeff, step_ecm, heat_generation, ecm_heat,
    simulate_ecm)
