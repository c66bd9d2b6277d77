from .response import (
    StepResponse, extract_step_response, SETTLING_SLOPE,
    DEFAULT_EXTRACTION_T_END)
from .foster import (
    FosterLtiModel, fit_foster, fit_foster_joint, relative_fit_error,
    pad_order, pad_taus, MIN_TAU_RATIO,
    save_model, load_model, design_matrix, DEFAULT_ORDER)
from .lti import simulate_lti, foster_update, zoh_coefficients
